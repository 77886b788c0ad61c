"""Exact Littelmann path crystals for simple and untwisted affine algebras,
with checks of the minuscule translation product theorems."""

from .affine import (
    build_pi_chain,
    demazure_translation,
    rhs_tensor,
    sigma_act,
    verify_theorem1,
    verify_theorem3,
)
from .crystalgraph import (
    BudgetExceeded,
    Crystal,
    character_decompose,
    closure,
    crystals_isomorphic,
    demazure_generate,
    highest_weight_crystal,
    ls_paths,
    tensor_concat,
)
from .pathspace import Path, concat, lower_f, raise_e
from .rootsystem import RootSystem, RootSystemError, build_root_system
from .skein import Skein, build_pi_N, build_skein, skein_lower, skein_raise, truncate, verify_theorem4

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "Crystal",
    "Path",
    "RootSystem",
    "RootSystemError",
    "Skein",
    "build_pi_N",
    "build_pi_chain",
    "build_root_system",
    "build_skein",
    "character_decompose",
    "closure",
    "concat",
    "crystals_isomorphic",
    "demazure_generate",
    "demazure_translation",
    "highest_weight_crystal",
    "lower_f",
    "ls_paths",
    "raise_e",
    "rhs_tensor",
    "sigma_act",
    "skein_lower",
    "skein_raise",
    "tensor_concat",
    "truncate",
    "verify_theorem1",
    "verify_theorem3",
    "verify_theorem4",
]
