"""Extended affine Weyl group action modulo delta, twisted Demazure
operators, the winding paths ``pi_m`` and the product-theorem verifiers.

A minuscule node ``i`` gives ``sigma = bar_sigma * t_{-varpi_i}``.  On an
affine weight ``mu + l*Lambda_0`` (charge dropped)::

    sigma(mu + l*Lambda_0)      = bar_sigma(mu - l*varpi_i) + l*Lambda_0
    sigma^-1(mu + l*Lambda_0)   = bar_sigma^-1(mu) + l*varpi_i + l*Lambda_0

For a sequence of minuscule nodes ``lambda_1..lambda_m`` the translation
``t_{-lambda_j}`` factors as ``u_j * sigma_j`` with ``u_j = w0 w_j*``, where
``w_j*`` is the longest element fixing ``lambda_j*``.  The twisted operator
``B_{u sigma}(pi)`` is computed as ``B_u(sigma pi)``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .crystalgraph import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Crystal,
    character_decompose,
    crystals_isomorphic,
    demazure_set,
    dominant_elements,
    highest_weight_crystal,
    prefix,
    tensor_concat,
)
from .pathspace import (
    Path,
    Step,
    act_linear,
    affine_indices,
    concat,
    finite_indices,
    finite_step,
    is_dominant,
    is_neutral,
    lambda0,
    path_weight,
)
from .rational import norm, to_str
from .rootsystem import RootSystem, RootSystemError, SigmaAut

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


# -- sigma action ------------------------------------------------------------


def _sigma_step(R: RootSystem, sig: SigmaAut, v: Step) -> Step:
    lvl = v[0]
    mu = v[1:]
    if lvl:
        mu = tuple(norm(x - lvl) if k == sig.node - 1 else x for k, x in enumerate(mu))
    return (lvl,) + R.apply_word(sig.bar_sigma, mu)


def _sigma_inv_step(R: RootSystem, sig: SigmaAut, v: Step) -> Step:
    lvl = v[0]
    mu = R.apply_word(sig.bar_sigma_inverse, v[1:])
    if lvl:
        mu = tuple(norm(x + lvl) if k == sig.node - 1 else x for k, x in enumerate(mu))
    return (lvl,) + mu


def sigma_act(R: RootSystem, sig: SigmaAut, power: int, x: Step | Path) -> Step | Path:
    """``sigma^power`` applied to an affine weight (step tuple) or a path."""
    power %= sig.order
    if isinstance(x, Path):
        if power == 0:
            return x
        return act_linear(lambda v: sigma_act(R, sig, power, v), x)
    v = tuple(x)
    for _ in range(power):
        v = _sigma_step(R, sig, v)
    return v


def sigma_inverse_act(R: RootSystem, sig: SigmaAut, power: int, x: Step | Path) -> Step | Path:
    """``sigma^-power``, computed with the explicit inverse formula."""
    power %= sig.order
    if isinstance(x, Path):
        if power == 0:
            return x
        return act_linear(lambda v: sigma_inverse_act(R, sig, power, v), x)
    v = tuple(x)
    for _ in range(power):
        v = _sigma_inv_step(R, sig, v)
    return v


# -- Weyl words --------------------------------------------------------------


def u_word(R: RootSystem, node: int) -> tuple[int, ...]:
    """Reduced word for ``w0 w*`` where ``w*`` is the longest element fixing
    ``varpi_node*``; read off the greedy descent from ``-varpi_node``."""
    _, word = R.raise_to_dominant(tuple(-c for c in R.fundamental_weight(node)))
    return word


def u_word_right(R: RootSystem, node: int) -> tuple[int, ...]:
    """The same element written as ``w_node w0``: inverse of ``w0 w_node``."""
    star = R.dual_node(node)
    _, word = R.raise_to_dominant(tuple(-c for c in R.fundamental_weight(star)))
    return tuple(reversed(word))


def _check_nodes(R: RootSystem, nodes: Sequence[int]) -> tuple[int, ...]:
    nodes = tuple(nodes)
    for j in nodes:
        R.sigma(j)  # raises for non-minuscule nodes
    return nodes


@dataclass(frozen=True)
class ExtendedElt:
    """``z = y * sigma^power`` with ``y`` given by an affine word on ``0..r``."""

    affine_word: tuple[int, ...]
    sigma: SigmaAut | None = None
    power: int = 0

    @property
    def length(self) -> int:
        return len(self.affine_word)

    def demazure(self, R: RootSystem, seeds: Iterable[Path], budget: int = DEFAULT_BUDGET) -> set[Path]:
        seeds = list(seeds)
        if self.sigma is not None and self.power % self.sigma.order:
            seeds = [sigma_act(R, self.sigma, self.power, p) for p in seeds]
        return demazure_set(R, seeds, self.affine_word, budget)


def translation_element(R: RootSystem, node: int, copies: int) -> ExtendedElt:
    """``t_{-copies*varpi_node} = (u sigma)^copies`` in ``y * sigma^k`` form.

    Moving each ``sigma`` to the right conjugates the letters of ``u`` by the
    node permutation: ``(u sigma)(u sigma) = u * sigma(u) * sigma^2``.
    """
    sig = R.sigma(node)
    u = u_word(R, node)
    word: list[int] = []
    letters = list(u)
    for _ in range(copies):
        word.extend(letters)
        letters = [sig.node_perm[j] for j in letters]
    return ExtendedElt(tuple(word), sig, copies % sig.order)


# -- pi chain and Demazure crystals ------------------------------------------


def build_pi_chain(R: RootSystem, nodes: Sequence[int]) -> list[Path]:
    """``pi_0 = (Lambda_0)``, ``pi_j = sigma_j^-1(pi_{j-1} * (lambda_j*))``."""
    nodes = _check_nodes(R, nodes)
    chain = [Path([lambda0(R)])]
    target = lambda0(R)
    for j in nodes:
        sig = R.sigma(j)
        star = finite_step(R.dual_weight(R.fundamental_weight(j)))
        pi = sigma_inverse_act(R, sig, 1, concat(chain[-1], Path([star])))
        assert path_weight(pi) == target, f"pi has weight {path_weight(pi)}"
        assert is_dominant(R, pi, affine=True), "pi is not affine dominant"
        chain.append(pi)
    return chain


def demazure_translation(
    R: RootSystem,
    nodes: Sequence[int],
    seed: Path | None = None,
    budget: int = DEFAULT_BUDGET,
    right_form: bool = False,
) -> Crystal:
    """Apply ``B_{lambda_1} ... B_{lambda_m}`` (right-most first) to ``seed``."""
    nodes = _check_nodes(R, nodes)
    if seed is None:
        seed = build_pi_chain(R, nodes)[-1]
    current = {seed}
    for j in reversed(nodes):
        sig = R.sigma(j)
        word = u_word_right(R, j) if right_form else u_word(R, j)
        rotated = {sigma_act(R, sig, 1, p) for p in current}
        current = demazure_set(R, rotated, word, budget)
    return Crystal(R, frozenset(current), affine_indices(R), (seed,))


def rhs_tensor(R: RootSystem, nodes: Sequence[int], budget: int = DEFAULT_BUDGET) -> Crystal:
    """``Lambda_0 * B(lambda_1*) * ... * B(lambda_m*)``."""
    nodes = _check_nodes(R, nodes)
    head = Path([lambda0(R)])
    if not nodes:
        return Crystal(R, frozenset([head]), affine_indices(R), (head,))
    factors = [highest_weight_crystal(R, R.dual_weight(R.fundamental_weight(j)), budget) for j in nodes]
    body = tensor_concat(*factors, check_closed=False)
    return prefix(head, body, affine_indices(R))


# -- reports -----------------------------------------------------------------


def _fmt_weight(w: Sequence) -> list[str]:
    return [to_str(x) for x in w]


def _decomposition_json(components) -> list:
    return [[_fmt_weight(w), m] for w, m in sorted(components.items(), reverse=True)]


# reports list the Demazure set itself only when it is this small
ELEMENT_LIMIT = 64


def _report(theorem: int, R: RootSystem, nodes: Sequence[int]) -> dict:
    return {
        "theorem": theorem,
        "type": R.type_label,
        "rank": R.rank,
        "nodes": list(nodes),
        "status": INCONCLUSIVE,
        "lhs_count": None,
        "rhs_count": None,
        "equal": False,
        "dominant_paths": None,
        "decomposition": None,
        "seed": None,
        "dominant_path": None,
        "elements": None,
        "elapsed_ms": 0,
    }


def _finish(report: dict, start: float) -> dict:
    report["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
    return report


def verify_theorem3(
    R: RootSystem,
    nodes: Sequence[int],
    budget: int = DEFAULT_BUDGET,
    lhs: Crystal | None = None,
) -> dict:
    """Set equality of the translated Demazure crystal and ``Lambda_0 * tensor``.

    ``lhs`` lets a caller supply a previously computed left-hand side.
    """
    start = time.perf_counter()
    nodes = _check_nodes(R, nodes)
    rep = _report(3, R, nodes)
    try:
        chain = build_pi_chain(R, nodes)
        rep["seed"] = chain[-1].to_json()
        if lhs is None:
            lhs = demazure_translation(R, nodes, chain[-1], budget)
        rep["lhs_count"] = len(lhs)
        rhs = rhs_tensor(R, nodes, budget)
        rep["rhs_count"] = len(rhs)
    except BudgetExceeded as exc:
        rep["partial"] = exc.stats
        return _finish(rep, start)
    doms = [p for p in lhs.nodes if is_dominant(R, p, affine=True)]
    rep["dominant_paths"] = len(doms)
    rep["equal"] = lhs.nodes == rhs.nodes
    if len(lhs) <= ELEMENT_LIMIT:
        rep["elements"] = [p.to_json() for p in lhs.sorted_nodes()]
    unique_seed = len(doms) == 1
    if unique_seed:
        rep["dominant_path"] = doms[0].to_json()
    rep["status"] = PASS if rep["equal"] and unique_seed else FAIL
    return _finish(rep, start)


def verify_theorem3_orderings(R: RootSystem, nodes: Sequence[int], budget: int = DEFAULT_BUDGET) -> dict:
    """Run the set check for every distinct ordering of ``nodes`` and compare
    the resulting Demazure crystals up to isomorphism."""
    start = time.perf_counter()
    nodes = _check_nodes(R, nodes)
    orders = sorted(set(itertools.permutations(nodes)))
    rows = []
    crystals = []
    try:
        for order in orders:
            lhs = demazure_translation(R, order, budget=budget)
            rows.append(verify_theorem3(R, order, budget, lhs=lhs))
            crystals.append(lhs)
    except BudgetExceeded as exc:
        return {"status": INCONCLUSIVE, "orderings": rows, "partial": exc.stats,
                "elapsed_ms": int((time.perf_counter() - start) * 1000)}
    iso = all(crystals_isomorphic(crystals[0], c) for c in crystals[1:])
    ok = iso and all(r["status"] == PASS for r in rows)
    if any(r["status"] == INCONCLUSIVE for r in rows):
        status = INCONCLUSIVE
    else:
        status = PASS if ok else FAIL
    return {
        "status": status,
        "orderings": rows,
        "isomorphic": iso,
        "elapsed_ms": int((time.perf_counter() - start) * 1000),
    }


def verify_theorem1(
    R: RootSystem,
    nodes: Sequence[int],
    budget: int = DEFAULT_BUDGET,
    lhs: Crystal | None = None,
) -> dict:
    """Finite characters and decompositions of both sides agree."""
    start = time.perf_counter()
    nodes = _check_nodes(R, nodes)
    rep = _report(1, R, nodes)
    fin = finite_indices(R)
    try:
        if lhs is None:
            lhs = demazure_translation(R, nodes, budget=budget)
        rep["seed"] = sorted(lhs.seeds)[0].to_json() if lhs.seeds else None
        stars = [R.dual_weight(R.fundamental_weight(j)) for j in nodes]
        if stars:
            rhs = tensor_concat(*[highest_weight_crystal(R, s, budget) for s in stars], check_closed=False)
        else:
            rhs = Crystal(R, frozenset([Path()]), fin, (Path(),))
    except BudgetExceeded as exc:
        rep["partial"] = exc.stats
        return _finish(rep, start)
    left = Crystal(R, lhs.nodes, fin, lhs.seeds)
    right = Crystal(R, rhs.nodes, fin, rhs.seeds)
    d_left = character_decompose(left, fin)
    d_right = character_decompose(right, fin)
    expected = 1
    for s in stars:
        expected *= R.weyl_dimension(s)
    rep["lhs_count"] = len(left)
    rep["rhs_count"] = len(right)
    rep["dominant_paths"] = len(dominant_elements(left, fin))
    rep["decomposition"] = _decomposition_json(d_left.components)
    rep["expected_size"] = expected
    rep["equal"] = d_left.weights == d_right.weights and d_left.components == d_right.components
    ok = rep["equal"] and len(left) == len(right) == expected
    rep["status"] = PASS if ok else FAIL
    return _finish(rep, start)


def single_translation_step(R: RootSystem, nodes: Sequence[int], j: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Check ``B_{lambda_j}(pi_j * T) = pi_{j-1} * B(lambda_j*) * T`` where ``T``
    is the tensor set for ``lambda_{j+1}..lambda_m`` (``1 <= j <= m``)."""
    nodes = _check_nodes(R, nodes)
    chain = build_pi_chain(R, nodes)
    tail_nodes = nodes[j:]
    stars = [highest_weight_crystal(R, R.dual_weight(R.fundamental_weight(k)), budget) for k in tail_nodes]
    tail = tensor_concat(*stars, check_closed=False).nodes if stars else frozenset([Path()])
    sig = R.sigma(nodes[j - 1])
    rotated = {sigma_act(R, sig, 1, concat(chain[j], t)) for t in tail}
    lhs = demazure_set(R, rotated, u_word(R, nodes[j - 1]), budget)
    star = highest_weight_crystal(R, R.dual_weight(R.fundamental_weight(nodes[j - 1])), budget)
    rhs = {concat(chain[j - 1], b, t) for b in star.nodes for t in tail}
    return lhs == rhs


def pi_neutral(R: RootSystem, p: Path) -> bool:
    return all(is_neutral(R, p, i) for i in finite_indices(R))


__all__ = [
    "ExtendedElt",
    "FAIL",
    "INCONCLUSIVE",
    "PASS",
    "RootSystemError",
    "build_pi_chain",
    "demazure_translation",
    "single_translation_step",
    "pi_neutral",
    "rhs_tensor",
    "sigma_act",
    "sigma_inverse_act",
    "translation_element",
    "u_word",
    "u_word_right",
    "verify_theorem1",
    "verify_theorem3",
    "verify_theorem3_orderings",
]
