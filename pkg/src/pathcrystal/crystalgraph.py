"""Path crystals: generation, the LS-path oracle, characters and isomorphism."""

from __future__ import annotations

import logging
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .pathspace import (
    Path,
    affine_indices,
    concat,
    f_string,
    finite_indices,
    finite_step,
    lower_f,
    path_weight,
    raise_e,
)
from .rational import Scalar, norm
from .rootsystem import RootSystem, RootSystemError

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 100_000


class BudgetExceeded(RuntimeError):
    """A generation step hit its node budget; ``stats`` holds partial counts."""

    def __init__(self, message: str, stats: dict):
        super().__init__(message)
        self.stats = stats


class CrystalError(ValueError):
    pass


@dataclass
class Crystal:
    """A finite set of canonical paths with the induced ``f_i``/``e_i`` edges.

    Edge maps are computed lazily when the crystal was produced by a
    generator that does not record them (Demazure sweeps, concatenation).
    """

    R: RootSystem
    nodes: frozenset
    index_set: tuple[int, ...]
    seeds: tuple[Path, ...] = ()
    _f: dict | None = field(default=None, repr=False)
    _e: dict | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, p: object) -> bool:
        return p in self.nodes

    def __iter__(self):
        return iter(self.sorted_nodes())

    def sorted_nodes(self) -> list[Path]:
        return sorted(self.nodes)

    def _compute_edges(self) -> None:
        f: dict[int, dict[Path, Path]] = {i: {} for i in self.index_set}
        e: dict[int, dict[Path, Path]] = {i: {} for i in self.index_set}
        for p in self.nodes:
            for i in self.index_set:
                q = lower_f(self.R, p, i)
                if q is not None and q in self.nodes:
                    f[i][p] = q
                q = raise_e(self.R, p, i)
                if q is not None and q in self.nodes:
                    e[i][p] = q
        self._f, self._e = f, e

    @property
    def f_edges(self) -> dict[int, dict[Path, Path]]:
        if self._f is None:
            self._compute_edges()
        return self._f

    @property
    def e_edges(self) -> dict[int, dict[Path, Path]]:
        if self._e is None:
            self._compute_edges()
        return self._e

    def weight(self, p: Path) -> tuple:
        return path_weight(p, self.R)

    # -- export -----------------------------------------------------------

    def to_json(self, edges: bool = True) -> dict:
        order = self.sorted_nodes()
        data: dict = {
            "type": self.R.type_label,
            "rank": self.R.rank,
            "index_set": list(self.index_set),
            "seeds": [s.to_json() for s in self.seeds],
            "nodes": [p.to_json() for p in order],
        }
        if edges:
            pos = {p: k for k, p in enumerate(order)}
            rows = []
            for direction, table in (("f", self.f_edges), ("e", self.e_edges)):
                for i in self.index_set:
                    for p, q in table[i].items():
                        rows.append({"from": pos[p], "to": pos[q], "color": i, "dir": direction})
            rows.sort(key=lambda r: (r["from"], r["dir"] != "f", r["color"]))
            data["edges"] = rows
        return data

    @classmethod
    def from_json(cls, data: dict) -> "Crystal":
        from .rootsystem import build_root_system

        R = build_root_system(data["type"], data["rank"])
        order = [Path.from_json(p) for p in data["nodes"]]
        index_set = tuple(data["index_set"])
        c = cls(R, frozenset(order), index_set, tuple(Path.from_json(s) for s in data["seeds"]))
        if "edges" in data:
            f = {i: {} for i in index_set}
            e = {i: {} for i in index_set}
            for row in data["edges"]:
                table = f if row["dir"] == "f" else e
                table[row["color"]][order[row["from"]]] = order[row["to"]]
            c._f, c._e = f, e
        return c

    def to_dot(self, name: str = "crystal") -> str:
        order = self.sorted_nodes()
        pos = {p: k for k, p in enumerate(order)}
        lines = [f"digraph {name} {{"]
        for k, p in enumerate(order):
            label = repr(p)[5:-1].replace('"', "'")
            lines.append(f'  n{k} [label="{label}"];')
        for direction, table, style in (("f", self.f_edges, "solid"), ("e", self.e_edges, "dashed")):
            for i in self.index_set:
                for p, q in sorted(table[i].items()):
                    lines.append(f'  n{pos[p]} -> n{pos[q]} [label="{i}", style={style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def default_index_set(R: RootSystem, seeds: Iterable[Path]) -> tuple[int, ...]:
    if any(v[0] != 0 for s in seeds for v in s.steps):
        return affine_indices(R)
    return finite_indices(R)


def closure(
    R: RootSystem,
    seeds: Iterable[Path],
    index_set: Sequence[int] | None = None,
    ops: str = "fe",
    budget: int = DEFAULT_BUDGET,
) -> Crystal:
    """Breadth-first closure of ``seeds`` under ``f_i`` (and ``e_i``)."""
    seeds = tuple(seeds)
    idx = tuple(index_set) if index_set is not None else default_index_set(R, seeds)
    use_e = "e" in ops
    nodes = set(seeds)
    queue = deque(seeds)
    f = {i: {} for i in idx}
    e = {i: {} for i in idx}
    while queue:
        p = queue.popleft()
        for i in idx:
            # an edge already seen from the other end need not be recomputed
            q = f[i].get(p) or lower_f(R, p, i)
            if q is not None:
                f[i][p] = q
                e[i][q] = p
                if q not in nodes:
                    nodes.add(q)
                    queue.append(q)
            if use_e and p not in e[i]:
                q = raise_e(R, p, i)
                if q is not None:
                    e[i][p] = q
                    f[i][q] = p
                    if q not in nodes:
                        nodes.add(q)
                        queue.append(q)
        if len(nodes) > budget:
            raise BudgetExceeded(
                f"closure exceeded budget {budget}",
                {"nodes": len(nodes), "frontier": len(queue)},
            )
    # with ops="f" the e-edges are the reversed f-edges; they are complete
    # because every node has been expanded once the queue drains
    return Crystal(R, frozenset(nodes), idx, seeds, f, e)


def demazure_set(R: RootSystem, seeds: Iterable[Path], word: Sequence[int], budget: int = DEFAULT_BUDGET) -> set[Path]:
    """``{f_{w1}^{k1} ... f_{wm}^{km} p}``, applying the last letter first."""
    current = set(seeds)
    for letter in reversed(tuple(word)):
        nxt: set[Path] = set()
        for p in current:
            if p in nxt:
                continue
            nxt.add(p)
            for q in f_string(R, p, letter)[1:]:
                if q in nxt:
                    break
                nxt.add(q)
        current = nxt
        if len(current) > budget:
            raise BudgetExceeded(
                f"Demazure sweep exceeded budget {budget}", {"nodes": len(current)}
            )
    return current


def demazure_generate(
    R: RootSystem,
    seed: Path | Iterable[Path],
    word: Sequence[int],
    index_set: Sequence[int] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Crystal:
    seeds = (seed,) if isinstance(seed, Path) else tuple(seed)
    nodes = demazure_set(R, seeds, word, budget)
    idx = tuple(index_set) if index_set is not None else default_index_set(R, seeds)
    return Crystal(R, frozenset(nodes), idx, seeds)


def dominant_elements(c: Crystal, index_set: Sequence[int] | None = None) -> list[Path]:
    idx = tuple(index_set) if index_set is not None else c.index_set
    return sorted(
        p for p in c.nodes if all(raise_e(c.R, p, i) is None for i in idx)
    )


@dataclass(frozen=True)
class Decomposition:
    weights: Counter
    components: Counter  # dominant weight -> multiplicity

    def component_list(self) -> list[tuple[tuple, int]]:
        return sorted(self.components.items(), reverse=True)


def character_decompose(c: Crystal, index_set: Sequence[int] | None = None) -> Decomposition:
    """Weight multiset and highest-weight decomposition.

    When the index set omits 0, weights are projected to their finite part.
    """
    idx = tuple(index_set) if index_set is not None else c.index_set
    project = 0 not in idx
    key = (lambda w: w[1:]) if project else (lambda w: w)
    weights = Counter(key(c.weight(p)) for p in c.nodes)
    comps = Counter(key(c.weight(p)) for p in dominant_elements(c, idx))
    if project:
        total = sum(m * c.R.weyl_dimension(w) for w, m in comps.items())
        if total != len(c):
            raise CrystalError(f"decomposition accounts for {total} of {len(c)} elements")
    return Decomposition(weights, comps)


# -- LS paths ----------------------------------------------------------------


def _cuts(lo: Fraction, d: Scalar, strict: bool) -> list[Fraction]:
    """Rationals ``a`` in ``[lo, 1)`` (``(lo, 1)`` when strict) with ``a*d`` integral."""
    d = Fraction(d)
    out = []
    # a = n/d with n integral; d may itself be fractional only for non-integral weights
    n = math.ceil(lo * d)
    while True:
        a = Fraction(n) / d
        if a >= 1:
            break
        if a > lo or (a == lo and not strict):
            out.append(a)
        n += 1
    return out


def ls_paths(R: RootSystem, lam: Sequence[Scalar], budget: int = DEFAULT_BUDGET) -> set[Path]:
    """All Lakshmibai-Seshadri paths of shape ``lam`` (level-0 paths)."""
    lam = tuple(norm(c) for c in lam)
    orbit, covers = R.orbit_and_covers(lam)
    # successive directions climb the order ``tau - d*alpha < tau``: the
    # first linear piece points in the lowest direction, matching f_i
    up: dict[tuple, list] = {t: [] for t in orbit}
    for cv in covers:
        up[cv.lower].append((cv.upper, cv.d))
    result: set[Path] = set()
    chains = 0

    def extend(tau: tuple, a_prev: Fraction, steps: list) -> None:
        nonlocal chains
        chains += 1
        if chains > budget * 50:
            raise BudgetExceeded("LS chain enumeration exceeded budget", {"paths": len(result)})
        last = 1 - a_prev
        result.add(Path(steps + [tuple(norm(last * x) for x in finite_step(tau))]))
        for nxt, d in up[tau]:
            for a in _cuts(a_prev, d, strict=(a_prev == 0)):
                seg = tuple(norm((a - a_prev) * x) for x in finite_step(tau))
                extend(nxt, a, steps + [seg])

    for tau in orbit:
        extend(tau, Fraction(0), [])
    return result


# -- isomorphism -------------------------------------------------------------


@dataclass
class BisimulationResult:
    ok: bool
    matched: int
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def bisimulate(
    seed_a: Hashable,
    step_a: Callable[[Hashable, int, str], Hashable | None],
    weight_a: Callable[[Hashable], Hashable],
    seed_b: Hashable,
    step_b: Callable[[Hashable, int, str], Hashable | None],
    weight_b: Callable[[Hashable], Hashable],
    index_set: Sequence[int],
    depth: int | None = None,
) -> BisimulationResult:
    """Parallel traversal matching coloured edges from two roots.

    Crystals generated from one element with deterministic edges are rigid,
    so a successful traversal of the whole graph is an isomorphism.  With
    ``depth`` set, only words of length ``<= depth`` are explored.
    """
    fwd = {seed_a: seed_b}
    back = {seed_b: seed_a}
    queue = deque([(seed_a, seed_b, 0)])
    while queue:
        a, b, dist = queue.popleft()
        if weight_a(a) != weight_b(b):
            return BisimulationResult(False, len(fwd), f"weights differ at {a!r} / {b!r}")
        if depth is not None and dist >= depth:
            continue
        for i in index_set:
            for direction in ("f", "e"):
                x, y = step_a(a, i, direction), step_b(b, i, direction)
                if (x is None) != (y is None):
                    return BisimulationResult(
                        False, len(fwd), f"{direction}_{i} defined on one side only at {a!r}"
                    )
                if x is None:
                    continue
                if x in fwd or y in back:
                    if fwd.get(x) != y or back.get(y) != x:
                        return BisimulationResult(False, len(fwd), f"inconsistent match via {direction}_{i}")
                    continue
                fwd[x] = y
                back[y] = x
                queue.append((x, y, dist + 1))
    return BisimulationResult(True, len(fwd))


def _single_dominant(c: Crystal) -> Path:
    doms = [p for p in c.nodes if not any(p in c.e_edges[i] for i in c.index_set)]
    if len(doms) != 1:
        raise CrystalError(f"expected one source element, found {len(doms)}; split by component first")
    return doms[0]


def crystals_isomorphic(
    c1: Crystal, c2: Crystal, weight_key: Callable[[tuple], Hashable] | None = None
) -> bool:
    """Isomorphism of two singly generated crystals via rooted bisimulation."""
    if len(c1) != len(c2) or c1.index_set != c2.index_set:
        return False
    key = weight_key or (lambda w: w)
    r1, r2 = _single_dominant(c1), _single_dominant(c2)

    def stepper(c: Crystal):
        def step(p, i, direction):
            table = c.f_edges if direction == "f" else c.e_edges
            return table[i].get(p)

        return step

    res = bisimulate(
        r1, stepper(c1), lambda p: key(c1.weight(p)),
        r2, stepper(c2), lambda p: key(c2.weight(p)),
        c1.index_set,
    )
    return res.ok and res.matched == len(c1)


def tensor_concat(*crystals: Crystal, check_closed: bool = True) -> Crystal:
    """All concatenations ``b1 * b2 * ...``; closure under the operators is asserted."""
    if not crystals:
        raise CrystalError("need at least one factor")
    R = crystals[0].R
    idx = crystals[0].index_set
    nodes = {p for p in crystals[0].nodes}
    for c in crystals[1:]:
        nodes = {concat(a, b) for a in nodes for b in c.nodes}
    if check_closed:
        for p in nodes:
            for i in idx:
                for q in (lower_f(R, p, i), raise_e(R, p, i)):
                    if q is not None and q not in nodes:
                        raise CrystalError(f"concatenation not closed under index {i}")
    seeds: tuple = ()
    if all(c.seeds for c in crystals):
        seeds = (concat(*[c.seeds[0] for c in crystals]),)
    return Crystal(R, frozenset(nodes), idx, seeds)


def highest_weight_crystal(R: RootSystem, lam: Sequence[Scalar], budget: int = DEFAULT_BUDGET) -> Crystal:
    """``B(lam)`` generated from the straight-line path ``(lam)``."""
    lam = tuple(norm(c) for c in lam)
    if not R.is_dominant(lam):
        raise RootSystemError(f"{lam} is not dominant")
    seed = Path([finite_step(lam)])
    return closure(R, [seed], finite_indices(R), ops="f", budget=budget)


def prefix(head: Path, c: Crystal, index_set: Sequence[int] | None = None) -> Crystal:
    """``head * c`` as a new crystal (edges recomputed lazily)."""
    nodes = frozenset(concat(head, p) for p in c.nodes)
    idx = tuple(index_set) if index_set is not None else c.index_set
    seeds = tuple(concat(head, s) for s in c.seeds)
    return Crystal(c.R, nodes, idx, seeds)
