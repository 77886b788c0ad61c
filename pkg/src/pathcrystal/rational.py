"""Exact scalar helpers.

Scalars are plain ``int`` whenever they are integral and ``Fraction``
otherwise.  Keeping integers as ``int`` makes the common integral paths
cheap while ``Fraction`` and ``int`` still compare and hash consistently.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]


def norm(x: Scalar) -> Scalar:
    """Collapse an integral ``Fraction`` to ``int``."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def div(a: Scalar, b: Scalar) -> Scalar:
    if type(a) is int and type(b) is int:
        if a % b == 0:
            return a // b
        return Fraction(a, b)
    return norm(Fraction(a) / b)


def is_integer(x: Scalar) -> bool:
    return type(x) is int or x.denominator == 1


def to_str(x: Scalar) -> str:
    """Serialize as ``"p/q"`` (or ``"p"`` when integral)."""
    return str(norm(x))


def from_str(s: str | int) -> Scalar:
    if isinstance(s, int):
        return s
    if "/" not in s:
        return int(s)
    return norm(Fraction(s))


def vec_to_str(v: Iterable[Scalar]) -> list[str]:
    return [to_str(x) for x in v]


def vec_from_str(v: Iterable[str | int]) -> tuple[Scalar, ...]:
    return tuple(from_str(x) for x in v)
