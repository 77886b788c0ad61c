"""Piecewise-linear paths and the root operators ``f_i``, ``e_i``.

A step (an affine weight modulo ``delta``) is a flat tuple
``(level, c_1, ..., c_r)``; ``level`` is the ``Lambda_0`` coefficient and
``c_k`` the coordinates of the finite part in the fundamental-weight basis.
Finite-algebra paths simply live at level 0.

Pairings with the affine simple coroots::

    <v, alpha_i^vee> = c_i                         (i >= 1)
    <v, alpha_0^vee> = level - <finite, theta^vee>

and ``alpha_0`` acts as ``-theta`` (the ``delta`` part is dropped).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .rational import Scalar, div, is_integer, norm, vec_from_str, vec_to_str
from .rootsystem import RootSystem

Step = tuple  # (level, c_1, ..., c_r)


# -- affine weights ------------------------------------------------------


def affine_weight(level: Scalar, finite: Sequence[Scalar]) -> Step:
    return (norm(level),) + tuple(norm(c) for c in finite)


def lambda0(R: RootSystem) -> Step:
    return (1,) + (0,) * R.rank


def finite_part(v: Step) -> tuple:
    return v[1:]


def level_of(v: Step) -> Scalar:
    return v[0]


class _Tables:
    """Per-root-system constants used in the hot loops."""

    __slots__ = ("rank", "comarks", "roots")

    def __init__(self, R: RootSystem):
        self.rank = R.rank
        self.comarks = R.comarks
        th = R.theta_weight
        self.roots = [(0,) + tuple(-x for x in th)] + [(0,) + col for col in R.simple_roots]


@lru_cache(maxsize=None)
def _tables(R: RootSystem) -> _Tables:
    return _Tables(R)


def affine_simple_root(R: RootSystem, i: int) -> Step:
    return _tables(R).roots[i]


def pair(R: RootSystem, i: int, v: Step) -> Scalar:
    if i:
        return v[i]
    t = _tables(R)
    return norm(v[0] - sum(a * c for a, c in zip(t.comarks, v[1:])))


def reflect(R: RootSystem, i: int, v: Step) -> Step:
    n = pair(R, i, v)
    if n == 0:
        return v
    a = _tables(R).roots[i]
    return tuple(norm(x - n * y) for x, y in zip(v, a))


def add(u: Step, v: Step) -> Step:
    return tuple(norm(x + y) for x, y in zip(u, v))


def scale(c: Scalar, v: Step) -> Step:
    return tuple(norm(c * x) for x in v)


# -- paths ---------------------------------------------------------------


def _positively_proportional(u: Step, v: Step) -> bool:
    # cheap rejections first; most neighbouring steps differ in support
    for x, y in zip(u, v):
        if (x == 0) != (y == 0):
            return False
    k = next(k for k, x in enumerate(u) if x != 0)
    a, b = u[k], v[k]
    if (a > 0) != (b > 0):
        return False
    return all(y * a == x * b for x, y in zip(u, v))


def _canonical_steps(steps: Iterable[Step]) -> tuple:
    out: list = []
    for v in steps:
        if not any(v):
            continue
        if out and _positively_proportional(out[-1], v):
            out[-1] = add(out[-1], v)
        else:
            out.append(tuple(v))
    return tuple(out)


def _join(*segments: Sequence[Step]) -> tuple:
    """Concatenate segments that are each canonical already; only the seams
    can need a merge."""
    out: list = []
    for seg in segments:
        for n, v in enumerate(seg):
            if n == 0 and out and _positively_proportional(out[-1], v):
                out[-1] = add(out[-1], v)
            else:
                out.append(v)
    return tuple(out)


class Path:
    """A path from the origin, stored in canonical form.

    Canonical form has no zero steps and no two consecutive positively
    proportional steps, so equality of ``Path`` values is equality of the
    underlying point sets up to reparametrization.
    """

    __slots__ = ("steps", "_hash")

    def __init__(self, steps: Iterable[Sequence[Scalar]] = ()):
        self.steps = _canonical_steps(tuple(norm(x) for x in v) for v in steps)
        self._hash = hash(self.steps)

    @classmethod
    def _trusted(cls, steps: tuple) -> "Path":
        p = cls.__new__(cls)
        p.steps = steps
        p._hash = hash(steps)
        return p

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Path) and self._hash == other._hash and self.steps == other.steps

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Path") -> bool:
        return self.steps < other.steps

    def __len__(self) -> int:
        return len(self.steps)

    def __repr__(self) -> str:
        return "Path(" + " * ".join(_fmt_step(v) for v in self.steps) + ")"

    def __mul__(self, other: "Path") -> "Path":
        return concat(self, other)

    @property
    def weight(self) -> Step:
        return path_weight(self)

    def to_json(self) -> dict:
        return {"steps": [[str(v[0]), vec_to_str(v[1:])] for v in self.steps]}

    @classmethod
    def from_json(cls, data: dict) -> "Path":
        return cls(
            (vec_from_str([lvl]) + vec_from_str(fin)) for lvl, fin in data["steps"]
        )


def _fmt_step(v: Step) -> str:
    fin = ",".join(str(x) for x in v[1:])
    return f"[{v[0]};{fin}]" if v[0] else f"({fin})"


def canonicalize(raw_steps: Iterable[Sequence[Scalar]]) -> Path:
    return Path(raw_steps)


def straight(v: Sequence[Scalar]) -> Path:
    """The one-step path to ``v``."""
    return Path([v])


def finite_step(w: Sequence[Scalar]) -> Step:
    """Lift a finite weight to a level-0 step."""
    return (0,) + tuple(norm(c) for c in w)


def concat(*paths: Path) -> Path:
    return Path._trusted(_join(*(p.steps for p in paths)))


def path_weight(p: Path, R: RootSystem | None = None) -> Step:
    if not p.steps:
        return (0,) * (R.rank + 1) if R is not None else ()
    acc = p.steps[0]
    for v in p.steps[1:]:
        acc = add(acc, v)
    return acc


def _heights(R: RootSystem, steps: Sequence[Step], i: int) -> list:
    h = [0]
    if i:
        for v in steps:
            h.append(h[-1] + v[i])
    else:
        cm = _tables(R).comarks
        for v in steps:
            h.append(h[-1] + v[0] - sum(a * c for a, c in zip(cm, v[1:])))
    return h


def height_profile(R: RootSystem, p: Path, i: int) -> list[tuple[Scalar, Scalar]]:
    """Breakpoints ``(t_j, h_i(t_j))`` with steps spread evenly over [0, 1]."""
    h = _heights(R, p.steps, i)
    k = len(p.steps)
    if k == 0:
        return [(0, 0), (1, 0)]
    return [(div(j, k), norm(x)) for j, x in enumerate(h)]


def _lower_steps(R: RootSystem, steps: tuple, i: int) -> tuple | None:
    h = _heights(R, steps, i)
    m = min(h)
    p = len(h) - 1 - h[::-1].index(m)
    target = m + 1
    q = next((k for k in range(p + 1, len(h)) if h[k] >= target), None)
    if q is None:
        return None
    v = steps[q - 1]
    frac = div(target - h[q - 1], h[q] - h[q - 1])
    middle = list(steps[p : q - 1])
    if frac == 1:
        middle.append(v)
        tail = steps[q:]
    else:
        middle.append(scale(frac, v))
        tail = (scale(1 - frac, v),) + steps[q:]
    # a reflection is linear and invertible, so the middle stays canonical
    return _join(steps[:p], [reflect(R, i, u) for u in middle], tail)


def _raise_steps(R: RootSystem, steps: tuple, i: int) -> tuple | None:
    h = _heights(R, steps, i)
    m = min(h)
    p = h.index(m)
    target = m + 1
    # largest k <= p with h[k-1] >= m+1; the crossing lies in step k-1
    k = next((k for k in range(p, 0, -1) if h[k - 1] >= target), None)
    if k is None:
        return None
    v = steps[k - 1]
    frac = div(h[k - 1] - target, h[k - 1] - h[k])
    head = list(steps[: k - 1])
    if frac == 0:
        middle = [v]
    else:
        head.append(scale(frac, v))
        middle = [scale(1 - frac, v)]
    middle.extend(steps[k:p])
    return _join(head, [reflect(R, i, u) for u in middle], steps[p:])


def lower_f(R: RootSystem, p: Path, i: int) -> Path | None:
    """Root operator ``f_i``; ``None`` when undefined."""
    out = _lower_steps(R, p.steps, i)
    return None if out is None else Path._trusted(out)


def raise_e(R: RootSystem, p: Path, i: int) -> Path | None:
    """Root operator ``e_i``, the inverse of ``f_i``; ``None`` when undefined."""
    out = _raise_steps(R, p.steps, i)
    return None if out is None else Path._trusted(out)


def f_string(R: RootSystem, p: Path, i: int) -> list[Path]:
    """``[p, f_i p, f_i^2 p, ...]`` up to the first undefined value."""
    out = [p]
    steps = p.steps
    while True:
        steps = _lower_steps(R, steps, i)
        if steps is None:
            return out
        out.append(Path._trusted(steps))


def phi(R: RootSystem, p: Path, i: int) -> int:
    return len(f_string(R, p, i)) - 1


def epsilon(R: RootSystem, p: Path, i: int) -> int:
    n = 0
    cur: Path | None = raise_e(R, p, i)
    while cur is not None:
        n += 1
        cur = raise_e(R, cur, i)
    return n


def affine_indices(R: RootSystem) -> tuple[int, ...]:
    return tuple(range(R.rank + 1))


def finite_indices(R: RootSystem) -> tuple[int, ...]:
    return tuple(range(1, R.rank + 1))


def is_dominant(R: RootSystem, p: Path, affine: bool = False) -> bool:
    idx = affine_indices(R) if affine else finite_indices(R)
    return all(min(_heights(R, p.steps, i)) >= 0 for i in idx)


def is_integral(p: Path) -> bool:
    return all(is_integer(x) for v in p.steps for x in v)


def is_neutral(R: RootSystem, p: Path, i: int) -> bool:
    h = _heights(R, p.steps, i)
    return min(h) >= 0 and h[-1] == 0


def act_linear(f: Callable[[Step], Step], p: Path) -> Path:
    """Apply a linear map stepwise."""
    return Path._trusted(_canonical_steps(f(v) for v in p.steps))


def word_map(R: RootSystem, word: Sequence[int]) -> Callable[[Step], Step]:
    """The product ``s_word[0] ... s_word[-1]`` acting on steps (indices 0..r)."""
    rev = tuple(reversed(word))

    def apply(v: Step) -> Step:
        for j in rev:
            v = reflect(R, j, v)
        return v

    return apply


def path_min_height(R: RootSystem, p: Path, i: int) -> Scalar:
    return norm(min(_heights(R, p.steps, i)))


__all__ = [
    "Path",
    "act_linear",
    "affine_indices",
    "affine_simple_root",
    "affine_weight",
    "canonicalize",
    "concat",
    "epsilon",
    "f_string",
    "finite_indices",
    "finite_part",
    "finite_step",
    "height_profile",
    "is_dominant",
    "is_integral",
    "is_neutral",
    "lambda0",
    "level_of",
    "lower_f",
    "pair",
    "path_weight",
    "phi",
    "raise_e",
    "reflect",
    "straight",
    "word_map",
]
