"""Cartan data for the simple types, Weyl group words and minuscule tables.

Conventions
-----------
* Nodes are numbered as in Bourbaki, ``1..r``; index ``0`` is reserved for
  the affine node.
* ``cartan[i-1][j-1] = <alpha_j, alpha_i^vee>``.  The simple root
  ``alpha_j`` written in the fundamental-weight basis is column ``j``.
* Weights are tuples of exact scalars in the fundamental-weight basis.
  Roots and coroots are integer tuples in the simple (co)root bases.
* A *word* ``[j1, ..., jk]`` stands for the product ``s_j1 ... s_jk``; it
  acts on a vector by applying ``s_jk`` first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .rational import Scalar, is_integer, norm, to_str

Weight = tuple  # tuple[Scalar, ...]
Word = tuple  # tuple[int, ...]


class RootSystemError(ValueError):
    """Invalid type/rank or a weight outside an operation's domain."""


@dataclass(frozen=True)
class PositiveRoot:
    root: tuple[int, ...]
    coroot: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.root)


@dataclass(frozen=True)
class Cover:
    """``lower = upper - d * alpha`` is a cover in the parabolic Bruhat order."""

    upper: Weight
    lower: Weight
    root: PositiveRoot
    d: Scalar


@dataclass(frozen=True)
class SigmaAut:
    """Diagram automorphism attached to a minuscule coweight.

    ``sigma = bar_sigma * t_{-varpi_node}``; ``node_perm[j]`` is the image
    of affine node ``j``.
    """

    node: int
    order: int
    node_perm: tuple[int, ...]
    bar_sigma: Word
    translation: Weight

    @property
    def bar_sigma_inverse(self) -> Word:
        return tuple(reversed(self.bar_sigma))


_VALID_RANKS = {
    "A": lambda r: r >= 1,
    "B": lambda r: r >= 2,
    "C": lambda r: r >= 2,
    "D": lambda r: r >= 4,
    "E": lambda r: 6 <= r <= 8,
    "F": lambda r: r == 4,
    "G": lambda r: r == 2,
}


def _gram(type_label: str, r: int) -> list[list[Fraction]]:
    """Inner products of simple roots, long roots normalized to length^2 2."""
    half = Fraction(1, 2)
    lengths = [Fraction(2)] * r
    bonds: list[tuple[int, int]] = []
    if type_label in "ABC":
        bonds = [(k, k + 1) for k in range(r - 1)]
        if type_label == "B":
            lengths[r - 1] = Fraction(1)
        elif type_label == "C":
            lengths = [Fraction(1)] * (r - 1) + [Fraction(2)]
    elif type_label == "D":
        bonds = [(k, k + 1) for k in range(r - 2)] + [(r - 3, r - 1)]
    elif type_label == "E":
        bonds = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, r - 1)]
    elif type_label == "F":
        bonds = [(0, 1), (1, 2), (2, 3)]
        lengths = [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
    elif type_label == "G":
        bonds = [(0, 1)]
        lengths = [Fraction(2, 3), Fraction(2)]
    g = [[Fraction(0)] * r for _ in range(r)]
    for k in range(r):
        g[k][k] = lengths[k]
    for a, b in bonds:
        # single bond between equal lengths: -len/2; multiple bond: -long/2
        val = -max(lengths[a], lengths[b]) * half
        g[a][b] = g[b][a] = val
    return g


def _solve(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> list[Fraction]:
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[k])] for k, row in enumerate(matrix)]
    for col in range(n):
        piv = next(k for k in range(col, n) if a[k][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for k in range(n):
            if k != col and a[k][col] != 0:
                f = a[k][col]
                a[k] = [x - f * y for x, y in zip(a[k], a[col])]
    return [row[n] for row in a]


@dataclass(frozen=True, eq=False)
class RootSystem:
    type_label: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    positive_roots: tuple[PositiveRoot, ...] = field(repr=False)
    theta: PositiveRoot = field(repr=False)

    # the type label and rank determine everything else; keep hashing cheap
    # since root systems key several caches in the hot loops
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootSystem):
            return NotImplemented
        return (self.type_label, self.rank) == (other.type_label, other.rank)

    def __hash__(self) -> int:
        return hash((self.type_label, self.rank))

    # -- basic data -------------------------------------------------------

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    @property
    def marks(self) -> tuple[int, ...]:
        return self.theta.root

    @property
    def comarks(self) -> tuple[int, ...]:
        return self.theta.coroot

    @property
    def nu_factors(self) -> tuple[Scalar, ...]:
        return tuple(norm(Fraction(a, b)) for a, b in zip(self.marks, self.comarks))

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @cached_property
    def simple_roots(self) -> tuple[Weight, ...]:
        """``alpha_j`` in the fundamental-weight basis (Cartan columns)."""
        r = self.rank
        return tuple(tuple(self.cartan[i][j] for i in range(r)) for j in range(r))

    @cached_property
    def theta_weight(self) -> Weight:
        return self.root_weight(self.theta.root)

    @property
    def zero(self) -> Weight:
        return (0,) * self.rank

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    def fundamental_weight(self, i: int) -> Weight:
        self._check_node(i)
        return tuple(1 if k == i - 1 else 0 for k in range(self.rank))

    def root_weight(self, coeffs: Sequence[int]) -> Weight:
        """Convert a vector in the simple-root basis to the weight basis."""
        r = self.rank
        return tuple(sum(coeffs[j] * self.cartan[i][j] for j in range(r)) for i in range(r))

    def root_length2(self, root: PositiveRoot) -> Fraction:
        k = root.root
        r = self.rank
        return sum(k[a] * k[b] * self.gram[a][b] for a in range(r) for b in range(r))

    def _check_node(self, i: int) -> None:
        if not 1 <= i <= self.rank:
            raise RootSystemError(f"node {i} out of range for {self.name}")

    # -- Weyl group -------------------------------------------------------

    def pair_coroot(self, w: Sequence[Scalar], coroot: Sequence[int]) -> Scalar:
        if len(w) != self.rank or len(coroot) != self.rank:
            raise RootSystemError("dimension mismatch")
        return norm(sum(k * c for k, c in zip(coroot, w)))

    def reflect_simple(self, i: int, w: Sequence[Scalar]) -> Weight:
        c = w[i - 1]
        if c == 0:
            return tuple(w)
        col = self.simple_roots[i - 1]
        return tuple(norm(x - c * a) for x, a in zip(w, col))

    def apply_word(self, word: Iterable[int], w: Sequence[Scalar]) -> Weight:
        out = tuple(w)
        for j in reversed(tuple(word)):
            out = self.reflect_simple(j, out)
        return out

    def raise_to_dominant(
        self, w: Sequence[Scalar], allowed: Iterable[int] | None = None
    ) -> tuple[Weight, Word]:
        """Greedy descent to the dominant cone of a parabolic subgroup.

        Returns ``(v, word)`` with ``v = s_word[-1] ... s_word[0] (w)``; the
        word is listed in application order and has minimal length.
        """
        nodes = sorted(self.nodes if allowed is None else set(allowed))
        cur = tuple(w)
        word: list[int] = []
        while True:
            j = next((j for j in nodes if cur[j - 1] < 0), None)
            if j is None:
                return cur, tuple(word)
            cur = self.reflect_simple(j, cur)
            word.append(j)

    def longest_word(self, allowed: Iterable[int] | None = None) -> Word:
        nodes = set(self.nodes if allowed is None else allowed)
        start = tuple(-1 if k in nodes else 0 for k in self.nodes)
        _, word = self.raise_to_dominant(start, nodes)
        # longest elements are involutions, so application order is a product word too
        return tuple(reversed(word))

    @cached_property
    def w0(self) -> Word:
        return self.longest_word()

    def is_dominant(self, w: Sequence[Scalar]) -> bool:
        return all(c >= 0 for c in w)

    def dual_weight(self, w: Sequence[Scalar]) -> Weight:
        """``-w0(w)`` for a dominant weight."""
        if not self.is_dominant(w):
            raise RootSystemError(f"{tuple(w)} is not dominant")
        return tuple(norm(-c) for c in self.apply_word(self.w0, w))

    def dual_node(self, i: int) -> int:
        d = self.dual_weight(self.fundamental_weight(i))
        return d.index(1) + 1

    def weyl_dimension(self, w: Sequence[Scalar]) -> int:
        if not self.is_dominant(w) or not all(is_integer(c) for c in w):
            raise RootSystemError(f"{tuple(w)} is not dominant integral")
        num = Fraction(1)
        for beta in self.positive_roots:
            num *= Fraction(sum(m * (c + 1) for m, c in zip(beta.coroot, w)), sum(beta.coroot))
        assert num.denominator == 1
        return int(num)

    def orbit(self, w: Sequence[Scalar]) -> list[Weight]:
        start = tuple(w)
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for j in self.nodes:
                u = self.reflect_simple(j, v)
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return sorted(seen, reverse=True)

    def orbit_and_covers(self, w: Sequence[Scalar]) -> tuple[list[Weight], list[Cover]]:
        """Orbit of a dominant weight and the covers of its Bruhat order.

        The order is generated by ``tau - d*alpha < tau`` for positive
        roots ``alpha`` with ``d = <tau, alpha^vee> > 0``; covers are taken
        as the transitive reduction of those relations.
        """
        if not self.is_dominant(w):
            raise RootSystemError(f"{tuple(w)} is not dominant")
        orbit = self.orbit(w)
        below: dict[Weight, dict[Weight, tuple[PositiveRoot, Scalar]]] = {t: {} for t in orbit}
        for tau in orbit:
            for beta in self.positive_roots:
                d = self.pair_coroot(tau, beta.coroot)
                if d > 0:
                    col = self.root_weight(beta.root)
                    low = tuple(norm(x - d * a) for x, a in zip(tau, col))
                    below[tau][low] = (beta, d)
        reach: dict[Weight, set[Weight]] = {}

        def descendants(t: Weight) -> set[Weight]:
            if t not in reach:
                acc: set[Weight] = set()
                for low in below[t]:
                    acc.add(low)
                    acc |= descendants(low)
                reach[t] = acc
            return reach[t]

        covers = []
        for tau in orbit:
            direct = below[tau]
            for low, (beta, d) in direct.items():
                if not any(low in descendants(o) for o in direct if o != low):
                    covers.append(Cover(tau, low, beta, d))
        return orbit, covers

    # -- minuscule data ---------------------------------------------------

    def coweight_in_coroot_basis(self, i: int) -> list[Fraction]:
        r = self.rank
        transpose = [[self.cartan[j][k] for j in range(r)] for k in range(r)]
        rhs = [1 if k == i - 1 else 0 for k in range(r)]
        return _solve(transpose, rhs)

    def is_minuscule_node(self, i: int) -> bool:
        return self.marks[i - 1] == 1

    def affine_cartan(self) -> list[list[int]]:
        """Affine Cartan matrix on nodes ``0..r`` (same index convention)."""
        r = self.rank
        th = self.theta_weight
        # alpha_0 acts as -theta at level 0; alpha_0^vee = K - theta^vee
        roots = [tuple(-x for x in th)] + [self.simple_roots[j] for j in range(r)]

        def pair(i: int, v: Weight) -> Scalar:
            if i == 0:
                return -sum(a * c for a, c in zip(self.comarks, v))
            return v[i - 1]

        return [[pair(i, roots[j]) for j in range(r + 1)] for i in range(r + 1)]

    def _sigma_for(self, i: int) -> SigmaAut:
        star = self.dual_weight(self.fundamental_weight(i))
        # greedy descent from -varpi_i^* gives y with y(-varpi_i^*) = varpi_i;
        # its inverse w0 w_i is read off the word in product order
        top, word = self.raise_to_dominant(tuple(-c for c in star))
        assert top == self.fundamental_weight(i)
        perm = [0] * (self.rank + 1)
        perm[i] = 0
        roots = {a: j + 1 for j, a in enumerate(self.simple_roots)}
        for j in self.nodes:
            img = self.apply_word(word, self.simple_roots[j - 1])
            if j == i:
                assert img == tuple(-x for x in self.theta_weight), "bar_sigma(alpha_i) != -theta"
            else:
                perm[j] = roots[img]
        neg = tuple(-x for x in self.apply_word(word, self.theta_weight))
        perm[0] = roots[neg]
        order = 1
        p = perm[:]
        while p != list(range(self.rank + 1)):
            p = [perm[x] for x in p]
            order += 1
        return SigmaAut(
            node=i,
            order=order,
            node_perm=tuple(perm),
            bar_sigma=word,
            translation=tuple(-c for c in self.fundamental_weight(i)),
        )

    @cached_property
    def _minuscule(self) -> tuple[SigmaAut, ...]:
        return tuple(self._sigma_for(i) for i in self.nodes if self.is_minuscule_node(i))

    def minuscule_data(self) -> list[SigmaAut]:
        return list(self._minuscule)

    def sigma(self, i: int) -> SigmaAut:
        for s in self._minuscule:
            if s.node == i:
                return s
        raise RootSystemError(f"node {i} of {self.name} is not minuscule")

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "positive_roots": [
                {"root": list(b.root), "coroot": list(b.coroot)} for b in self.positive_roots
            ],
            "marks": list(self.marks),
            "comarks": list(self.comarks),
            "nu_factors": [to_str(x) for x in self.nu_factors],
            "minuscule_nodes": [s.node for s in self._minuscule],
            "sigma": {
                str(s.node): {
                    "perm": list(s.node_perm),
                    "order": s.order,
                    "bar_sigma_word": list(s.bar_sigma),
                }
                for s in self._minuscule
            },
        }


def _positive_roots(cartan: Sequence[Sequence[int]]) -> list[PositiveRoot]:
    r = len(cartan)
    unit = [tuple(1 if k == j else 0 for k in range(r)) for j in range(r)]
    start = [PositiveRoot(u, u) for u in unit]
    seen = {p.root: p for p in start}
    queue = deque(start)
    while queue:
        beta = queue.popleft()
        for i in range(r):
            if beta.root == unit[i]:
                continue
            n = sum(beta.root[j] * cartan[i][j] for j in range(r))
            m = sum(beta.coroot[j] * cartan[j][i] for j in range(r))
            root = tuple(k - n * (1 if j == i else 0) for j, k in enumerate(beta.root))
            coroot = tuple(k - m * (1 if j == i else 0) for j, k in enumerate(beta.coroot))
            if root not in seen:
                seen[root] = PositiveRoot(root, coroot)
                queue.append(seen[root])
    return sorted(seen.values(), key=lambda b: (b.height, b.root))


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int) -> RootSystem:
    type_label = type_label.upper()
    check = _VALID_RANKS.get(type_label)
    if check is None or not isinstance(rank, int) or not check(rank):
        raise RootSystemError(f"no simple root system of type {type_label}{rank}")
    g = _gram(type_label, rank)
    cartan = tuple(
        tuple(int(2 * g[i][j] / g[i][i]) for j in range(rank)) for i in range(rank)
    )
    roots = _positive_roots(cartan)
    top = max(b.height for b in roots)
    (theta,) = [b for b in roots if b.height == top]
    for b in roots:
        assert all(x <= y for x, y in zip(b.root, theta.root))
    return RootSystem(
        type_label=type_label,
        rank=rank,
        cartan=cartan,
        gram=tuple(tuple(row) for row in g),
        positive_roots=tuple(roots),
        theta=theta,
    )


def parse_type(label: str) -> tuple[str, int]:
    """``"E6"`` -> ``("E", 6)``."""
    label = label.strip().upper()
    if len(label) < 2 or not label[1:].isdigit():
        raise RootSystemError(f"cannot parse type {label!r}")
    return label[0], int(label[1:])


def word_length_check(R: RootSystem, word: Sequence[int]) -> bool:
    """True if ``word`` is reduced: its length equals the inversion count."""
    inv = 0
    for beta in R.positive_roots:
        img = R.apply_word(tuple(reversed(word)), R.root_weight(beta.root))
        # w^{-1}(beta) negative <=> beta is an inversion of w
        in_root = _weight_to_root(R, img)
        if all(x <= 0 for x in in_root):
            inv += 1
    return inv == len(word)


def _weight_to_root(R: RootSystem, w: Weight) -> list[Fraction]:
    r = R.rank
    return _solve([[R.cartan[i][j] for j in range(r)] for i in range(r)], list(w))


__all__ = [
    "Cover",
    "PositiveRoot",
    "RootSystem",
    "RootSystemError",
    "SigmaAut",
    "build_root_system",
    "parse_type",
    "word_length_check",
]
