"""Semi-infinite paths presented as ``... * coil * coil * tail`` ending at a
level-one weight, with the root operators lifted from finite truncations.

A skein with coil ``c``, tail ``T`` and ``x`` absorbed coils has the
truncations ``trunc(k) = (Lambda_0) * c^(k - x) * T`` for ``k >= x``.  Its
endpoint is the weight of any truncation.  The coil is the weight-zero
dominant path ``pi_N`` built from the minuscule rotation ``sigma``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .affine import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    build_pi_chain,
    demazure_translation,
    sigma_inverse_act,
    translation_element,
)
from .crystalgraph import DEFAULT_BUDGET, BudgetExceeded, bisimulate, highest_weight_crystal, tensor_concat
from .pathspace import (
    Path,
    Step,
    affine_indices,
    concat,
    finite_step,
    is_dominant,
    lambda0,
    lower_f,
    path_weight,
    raise_e,
)
from .rational import div, is_integer, norm, vec_to_str
from .rootsystem import RootSystem, RootSystemError, build_root_system

# coils of slack used when lifting an operator; the result is re-derived
# with one more coil and the two must agree
SLACK = 1


class SkeinError(RuntimeError):
    """An operator failed to stabilize within the configured slack."""


@lru_cache(maxsize=None)
def build_pi_N(R: RootSystem, node: int) -> Path:
    """``sigma^-N(varpi*) * ... * sigma^-1(varpi*)`` for a minuscule node."""
    sig = R.sigma(node)
    n = sig.order
    cow = R.coweight_in_coroot_basis(node)
    if not all(is_integer(n * c) for c in cow):
        raise RootSystemError(f"{n} * coweight {node} is not in the coroot lattice")
    star = finite_step(R.dual_weight(R.fundamental_weight(node)))
    coil = Path([sigma_inverse_act(R, sig, k, star) for k in range(n, 0, -1)])
    assert len(coil) == n, "coil steps merged"
    assert path_weight(coil, R) == (0,) * (R.rank + 1), "coil weight is not zero"
    assert is_dominant(R, coil), "coil is not dominant"
    head = Path([lambda0(R)])
    assert concat(head, coil) == build_pi_chain(R, [node] * n)[-1], "coil differs from the chain"
    assert len(concat(coil, coil)) == 2 * n, "consecutive coils merge"
    return coil


def unique_dominant_check(R: RootSystem, node: int, budget: int = DEFAULT_BUDGET) -> tuple[int, list[Path]]:
    """Scan ``Lambda_0 * B(varpi*)^N``; return its size and affine-dominant paths."""
    sig = R.sigma(node)
    b = highest_weight_crystal(R, R.dual_weight(R.fundamental_weight(node)), budget)
    if len(b) ** sig.order > budget:
        raise BudgetExceeded("tensor power exceeds budget", {"factors": len(b), "power": sig.order})
    body = tensor_concat(*([b] * sig.order), check_closed=False)
    head = Path([lambda0(R)])
    doms = sorted(p for p in (concat(head, q) for q in body.nodes) if is_dominant(R, p, affine=True))
    return len(body), doms


@dataclass(frozen=True)
class Skein:
    R: RootSystem
    node: int
    coil: Path
    tail: Path
    expanded: int

    @property
    def endpoint(self) -> Step:
        return path_weight(concat(Path([lambda0(self.R)]), self.tail), self.R)

    def truncate(self, k: int) -> Path:
        return truncate(self, k)

    def to_json(self) -> dict:
        return {
            "type": self.R.type_label,
            "rank": self.R.rank,
            "node": self.node,
            "endpoint": vec_to_str(self.endpoint),
            "coil": self.coil.to_json(),
            "tail": self.tail.to_json(),
            "expanded": self.expanded,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Skein":
        R = build_root_system(data["type"], data["rank"])
        return cls(R, data["node"], Path.from_json(data["coil"]), Path.from_json(data["tail"]), data["expanded"])

    def __repr__(self) -> str:
        return f"Skein({self.R.name}, node={self.node}, expanded={self.expanded}, tail={self.tail!r})"


def build_skein(R: RootSystem, node: int) -> Skein:
    return Skein(R, node, build_pi_N(R, node), Path(), 0)


def truncate(s: Skein, k: int) -> Path:
    if k < s.expanded:
        raise ValueError(f"truncation {k} is below the {s.expanded} absorbed coils")
    steps = [lambda0(s.R)]
    for _ in range(k - s.expanded):
        steps.extend(s.coil.steps)
    steps.extend(s.tail.steps)
    return Path(steps)


def _same_ray(u: Step, v: Step) -> bool:
    k = next(k for k, x in enumerate(v) if x != 0)
    c = div(u[k], v[k])
    return c > 0 and all(a == c * b for a, b in zip(u, v))


def _normalize(s: Skein, p: Path, k: int) -> Skein:
    """Read a truncation back as ``(Lambda_0) * coil^j * tail``."""
    head = lambda0(s.R)
    steps = p.steps
    if not steps or steps[0] != head:
        raise SkeinError(f"operator changed the head step: {p!r}")
    pos = 1
    coil = s.coil.steps
    n = len(coil)
    j = 0
    while steps[pos : pos + n] == coil:
        pos += n
        j += 1
    rest = steps[pos:]
    # the tail may start parallel to the last coil step, in which case the
    # canonical form has fused the two
    if len(rest) >= n and rest[: n - 1] == coil[: n - 1]:
        extra = tuple(norm(a - b) for a, b in zip(rest[n - 1], coil[-1]))
        if any(extra) and _same_ray(extra, coil[-1]):
            rest = (extra,) + rest[n:]
            j += 1
    tail = Path._trusted(rest)
    if not all(is_integer(x) for x in tail.weight):
        raise SkeinError(f"non-integral tail endpoint {tail!r}")
    return Skein(s.R, s.node, s.coil, tail, k - j)


def _lift(s: Skein, i: int, op) -> Skein | None:
    k = max(s.expanded, 0) + SLACK
    results = []
    for kk in (k, k + 1):
        q = op(s.R, truncate(s, kk), i)
        results.append(None if q is None else _normalize(s, q, kk))
    if results[0] != results[1]:
        raise SkeinError(f"operator {i} did not stabilize within {SLACK} coil(s) on {s!r}")
    return results[0]


def skein_lower(s: Skein, i: int) -> Skein | None:
    """``f_i`` on the skein; ``None`` when undefined on all long truncations."""
    return _lift(s, i, lower_f)


def skein_raise(s: Skein, i: int) -> Skein | None:
    """``e_i`` on the skein; ``None`` when undefined."""
    return _lift(s, i, raise_e)


def skein_demazure(seeds: Sequence[Skein], word: Sequence[int], budget: int = DEFAULT_BUDGET) -> set[Skein]:
    """Demazure sweep on skeins, last letter first."""
    current = set(seeds)
    for letter in reversed(tuple(word)):
        nxt: set[Skein] = set()
        for s in current:
            cur: Skein | None = s
            while cur is not None and cur not in nxt:
                nxt.add(cur)
                cur = skein_lower(cur, letter)
        current = nxt
        if len(current) > budget:
            raise BudgetExceeded(f"skein Demazure sweep exceeded budget {budget}", {"nodes": len(current)})
    return current


def _default_rows(R: RootSystem, node: int, budget: int) -> int:
    sig = R.sigma(node)
    dim = R.weyl_dimension(R.dual_weight(R.fundamental_weight(node)))
    rows = 0
    while rows < 2 and dim ** (sig.order * (rows + 1)) <= budget:
        rows += 1
    return rows


def verify_theorem4(
    R: RootSystem,
    node: int,
    depth: int = 4,
    rows: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> dict:
    """Finite-depth checks of the skein model against ``(Lambda_0)``.

    * ``ball``: depth-limited bisimulation of the skein crystal from
      ``pi_infinity`` and the path crystal from ``(Lambda_0)``.
    * ``rows``: for ``m`` coils, the skein Demazure set of the translation by
      ``N*m`` copies of the coweight, truncated at ``m`` coils, equals the
      translated Demazure crystal of the chain seed.
    * ``unique_dominant``: ``Lambda_0 * B(varpi*)^N`` has one dominant path,
      namely ``Lambda_0 * pi_N``.
    """
    start = time.perf_counter()
    sig = R.sigma(node)
    rep: dict = {
        "theorem": 4,
        "type": R.type_label,
        "rank": R.rank,
        "nodes": [node],
        "depth": depth,
        "status": INCONCLUSIVE,
        "order": sig.order,
        "coil": build_pi_N(R, node).to_json(),
        "ball": None,
        "rows": [],
        "unique_dominant": None,
        "elapsed_ms": 0,
    }
    idx = affine_indices(R)
    pi_inf = build_skein(R, node)
    head = Path([lambda0(R)])
    try:
        res = bisimulate(
            pi_inf,
            lambda s, i, d: skein_lower(s, i) if d == "f" else skein_raise(s, i),
            lambda s: s.endpoint,
            head,
            lambda p, i, d: lower_f(R, p, i) if d == "f" else raise_e(R, p, i),
            lambda p: path_weight(p, R),
            idx,
            depth,
        )
        rep["ball"] = {"ok": res.ok, "matched": res.matched, "reason": res.reason}

        if rows is None:
            rows = _default_rows(R, node, budget)
        for m in range(1, rows + 1):
            elt = translation_element(R, node, sig.order * m)
            skeins = skein_demazure([pi_inf], elt.affine_word, budget)
            fits = all(s.expanded <= m for s in skeins)
            truncs = {truncate(s, m) for s in skeins} if fits else set()
            lhs = demazure_translation(R, [node] * (sig.order * m), budget=budget)
            rep["rows"].append(
                {"coils": m, "skein_count": len(skeins), "demazure_count": len(lhs), "equal": fits and truncs == lhs.nodes}
            )

        size, doms = unique_dominant_check(R, node, budget)
        expected = concat(head, build_pi_N(R, node))
        rep["unique_dominant"] = {"scanned": size, "dominant": len(doms), "is_pi_N": doms == [expected]}
    except BudgetExceeded as exc:
        rep["partial"] = exc.stats
        rep["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
        return rep

    ok = rep["ball"]["ok"] and all(r["equal"] for r in rep["rows"]) and rep["unique_dominant"]["is_pi_N"]
    rep["status"] = PASS if ok else FAIL
    rep["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
    return rep


__all__ = [
    "SLACK",
    "Skein",
    "SkeinError",
    "build_pi_N",
    "build_skein",
    "skein_demazure",
    "skein_lower",
    "skein_raise",
    "truncate",
    "unique_dominant_check",
    "verify_theorem4",
]
