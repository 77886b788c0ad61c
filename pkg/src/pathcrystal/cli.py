"""Command-line entry point: ``verify``, ``export`` and ``cache``.

Exit codes: 0 pass, 1 fail, 2 inconclusive (budget), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path as FsPath
from typing import Sequence

from .affine import (
    INCONCLUSIVE,
    PASS,
    build_pi_chain,
    demazure_translation,
    u_word,
    verify_theorem1,
    verify_theorem3,
    verify_theorem3_orderings,
)
from .cache import Cache, default_root, make_key
from .crystalgraph import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Crystal,
    default_index_set,
    demazure_generate,
    highest_weight_crystal,
)
from .pathspace import Path, affine_indices
from .rootsystem import RootSystem, RootSystemError, build_root_system, parse_type
from .skein import verify_theorem4

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64

log = logging.getLogger("pathcrystal")

# flag name -> default; ``None`` in the parsed namespace means "not given"
DEFAULTS = {
    "type": None,
    "rank": None,
    "thm": 3,
    "nodes": None,
    "depth": 4,
    "rows": None,
    "budget": DEFAULT_BUDGET,
    "out": "reports",
    "format": "json",
    "no_cache": False,
    "seed_file": None,
    "word": None,
    "weight": None,
    "all_orders": False,
    "cache_dir": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means inconclusive here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--type", help="type letter A-G, or a label such as E6")
    p.add_argument("--rank", type=int)
    p.add_argument("--budget", type=int, help="node budget for each generation step")
    p.add_argument("--out", help="output directory")
    p.add_argument("--no-cache", dest="no_cache", action="store_const", const=True)
    p.add_argument("--cache-dir", dest="cache_dir", help="cache root (default: $PATHCRYSTAL_CACHE)")
    p.add_argument("--config", help="JSON file with default values for these flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pathcrystal", description="Path crystal builder and product-theorem verifier.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a theorem check and write a JSON report")
    _common(v)
    v.add_argument("--thm", type=int, choices=(1, 3, 4))
    v.add_argument("--nodes", type=_int_list, help="minuscule nodes, e.g. 1,1,2")
    v.add_argument("--depth", type=int, help="operator-word depth for theorem 4")
    v.add_argument("--rows", type=int, help="coil rows compared for theorem 4")
    v.add_argument("--all-orders", dest="all_orders", action="store_const", const=True,
                   help="theorem 3: check every ordering of the nodes")

    e = sub.add_parser("export", help="write a crystal as JSON or DOT")
    _common(e)
    e.add_argument("--format", choices=("json", "dot"))
    e.add_argument("--weight", type=_int_list, help="dominant weight: export B(weight)")
    e.add_argument("--seed-file", dest="seed_file", help="JSON path used as a Demazure seed")
    e.add_argument("--word", type=_int_list, help="Demazure word applied to the seed")
    e.add_argument("--nodes", type=_int_list, help="export the translated Demazure crystal")

    c = sub.add_parser("cache", help="inspect or clear the crystal cache")
    c.add_argument("action", choices=("status", "clear"))
    c.add_argument("--cache-dir", dest="cache_dir")
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge flags over the config file over built-in defaults."""
    config: dict = {}
    path = getattr(args, "config", None)
    if path:
        try:
            config = json.loads(FsPath(path).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}")
        if not isinstance(config, dict):
            raise UsageError("config file must hold a JSON object")
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is None:
            value = config.get(key.replace("_", "-"), config.get(key, default))
            if key in ("nodes", "word", "weight") and isinstance(value, str):
                value = _int_list(value)
            setattr(args, key, value)
    if args.budget is not None and args.budget <= 0:
        raise UsageError("budget must be positive")
    return args


def _root_system(args: argparse.Namespace) -> RootSystem:
    if args.type is None:
        raise UsageError("--type is required")
    label = str(args.type)
    rank = args.rank
    try:
        if len(label) > 1:
            label, parsed = parse_type(label)
            if rank is not None and rank != parsed:
                raise UsageError(f"--type {args.type} conflicts with --rank {rank}")
            rank = parsed
        if rank is None:
            raise UsageError("--rank is required")
        return build_root_system(label, rank)
    except RootSystemError as exc:
        raise UsageError(str(exc))


def _minuscule_nodes(R: RootSystem, nodes: Sequence[int] | None) -> list[int]:
    if nodes is None:
        raise UsageError("--nodes is required")
    if not R.minuscule_data():
        raise UsageError(f"{R.name} has no minuscule nodes")
    for j in nodes:
        if not 1 <= j <= R.rank or not R.is_minuscule_node(j):
            allowed = ",".join(str(s.node) for s in R.minuscule_data())
            raise UsageError(f"node {j} is not minuscule in {R.name} (choose from {allowed})")
    return list(nodes)


def _cache(args: argparse.Namespace) -> Cache:
    return Cache(args.cache_dir, enabled=not args.no_cache)


def _lhs_key(R: RootSystem, nodes: Sequence[int]) -> str:
    seed = build_pi_chain(R, nodes)[-1].to_json()
    word = {"nodes": list(nodes), "u": [list(u_word(R, j)) for j in nodes]}
    return make_key("demazure_translation", R.type_label, R.rank, seed, word)


def _crystal_payload(c: Crystal) -> dict:
    return {"nodes": [p.to_json() for p in c.sorted_nodes()], "seeds": [s.to_json() for s in c.seeds]}


def cached_translation(R: RootSystem, nodes: Sequence[int], cache: Cache, budget: int) -> Crystal:
    key = _lhs_key(R, nodes)
    hit = cache.get(key)
    if hit is not None:
        return Crystal(
            R,
            frozenset(Path.from_json(p) for p in hit["nodes"]),
            affine_indices(R),
            tuple(Path.from_json(s) for s in hit["seeds"]),
        )
    c = demazure_translation(R, nodes, budget=budget)
    cache.put(key, _crystal_payload(c))
    return c


def _summary(rep: dict) -> str:
    name = f"{rep['type']}{rep['rank']}"
    nodes = ",".join(str(j) for j in rep.get("nodes", []))
    parts = [rep["status"], f"theorem {rep['theorem']}", name, f"nodes={nodes}"]
    if rep["theorem"] in (1, 3):
        parts.append(f"lhs={rep['lhs_count']} rhs={rep['rhs_count']}")
        parts.append(f"dominant={rep['dominant_paths']}")
    else:
        ball = rep.get("ball") or {}
        parts.append(f"depth={rep['depth']} ball={ball.get('matched')}")
        parts.append("rows=" + "/".join(str(r["demazure_count"]) for r in rep.get("rows", [])))
        ud = rep.get("unique_dominant") or {}
        parts.append(f"scanned={ud.get('scanned')} dominant={ud.get('dominant')}")
    parts.append(f"({rep['elapsed_ms']} ms)")
    return " ".join(parts)


def _write_report(rep: dict, out: FsPath, stem: str) -> FsPath:
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}.json"
    path.write_text(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    return path


def _exit_for(status: str) -> int:
    return {PASS: EXIT_PASS, INCONCLUSIVE: EXIT_INCONCLUSIVE}.get(status, EXIT_FAIL)


def cmd_verify(args: argparse.Namespace) -> int:
    R = _root_system(args)
    cache = _cache(args)
    start = time.perf_counter()
    thm = args.thm
    if thm == 4:
        nodes = _minuscule_nodes(R, args.nodes)
        if len(nodes) != 1:
            raise UsageError("theorem 4 takes exactly one node")
        if args.depth is None or args.depth < 0:
            raise UsageError("--depth must be non-negative")
        key = make_key("report", R.type_label, R.rank, None, nodes,
                       {"thm": 4, "depth": args.depth, "rows": args.rows})
        rep = cache.get(key)
        if rep is None:
            rep = verify_theorem4(R, nodes[0], args.depth, args.rows, args.budget)
            if rep["status"] != INCONCLUSIVE:
                cache.put(key, {k: v for k, v in rep.items() if k != "elapsed_ms"})
    else:
        nodes = _minuscule_nodes(R, args.nodes)
        if thm == 3 and args.all_orders:
            return _verify_orderings(R, nodes, args)
        key = make_key("report", R.type_label, R.rank, None, nodes, {"thm": thm})
        rep = cache.get(key)
        if rep is None:
            try:
                lhs = cached_translation(R, nodes, cache, args.budget)
            except BudgetExceeded:
                lhs = None
            if lhs is None:
                verify = verify_theorem3 if thm == 3 else verify_theorem1
                rep = verify(R, nodes, args.budget)
            elif thm == 3:
                rep = verify_theorem3(R, nodes, args.budget, lhs=lhs)
            else:
                rep = verify_theorem1(R, nodes, args.budget, lhs=lhs)
            if rep["status"] != INCONCLUSIVE:
                cache.put(key, {k: v for k, v in rep.items() if k != "elapsed_ms"})
    rep["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
    stem = f"thm{thm}_{R.name}_" + ("-".join(str(j) for j in nodes) or "none")
    path = _write_report(rep, FsPath(args.out), stem)
    line = _summary(rep)
    (FsPath(args.out) / f"{stem}.txt").write_text(line + "\n")
    print(line)
    print(f"report: {path}")
    if cache.enabled:
        log.info("cache hits=%d misses=%d", cache.hits, cache.misses)
    return _exit_for(rep["status"])


def _verify_orderings(R: RootSystem, nodes: list[int], args: argparse.Namespace) -> int:
    rep = verify_theorem3_orderings(R, nodes, args.budget)
    rep.update({"theorem": 3, "type": R.type_label, "rank": R.rank, "nodes": nodes})
    stem = f"thm3_{R.name}_" + "-".join(str(j) for j in nodes) + "_orders"
    path = _write_report(rep, FsPath(args.out), stem)
    for row in rep["orderings"]:
        print(_summary(row))
    print(f"{rep['status']} orderings={len(rep['orderings'])} isomorphic={rep.get('isomorphic')}")
    print(f"report: {path}")
    return _exit_for(rep["status"])


def cmd_export(args: argparse.Namespace) -> int:
    R = _root_system(args)
    cache = _cache(args)
    chosen = [x is not None for x in (args.weight, args.seed_file, args.nodes)]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --weight, --seed-file or --nodes")
    if args.weight is not None:
        if len(args.weight) != R.rank or any(c < 0 for c in args.weight):
            raise UsageError(f"--weight needs {R.rank} non-negative coordinates")
        crystal = highest_weight_crystal(R, tuple(args.weight), args.budget)
        stem = f"{R.name}_B_" + "-".join(str(c) for c in args.weight)
    elif args.seed_file is not None:
        try:
            seed = Path.from_json(json.loads(FsPath(args.seed_file).read_text()))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read seed file {args.seed_file}: {exc}")
        word = list(args.word or [])
        if any(not 0 <= j <= R.rank for j in word):
            raise UsageError(f"word letters must lie in 0..{R.rank}")
        if any(len(v) != R.rank + 1 for v in seed.steps):
            raise UsageError(f"seed steps must have {R.rank + 1} coordinates")
        key = make_key("demazure", R.type_label, R.rank, seed.to_json(), word)
        hit = cache.get(key)
        if hit is not None:
            nodes = frozenset(Path.from_json(p) for p in hit["nodes"])
            crystal = Crystal(R, nodes, default_index_set(R, [seed]), (seed,))
        else:
            crystal = demazure_generate(R, seed, word, budget=args.budget)
            cache.put(key, _crystal_payload(crystal))
        stem = f"{R.name}_demazure_" + ("-".join(str(j) for j in word) or "empty")
    else:
        nodes = _minuscule_nodes(R, args.nodes)
        crystal = cached_translation(R, nodes, cache, args.budget)
        stem = f"{R.name}_translation_" + "-".join(str(j) for j in nodes)
    out = FsPath(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.format == "dot":
            path = out / f"{stem}.dot"
            path.write_text(crystal.to_dot())
        else:
            path = out / f"{stem}.json"
            path.write_text(json.dumps(crystal.to_json(), indent=1, sort_keys=True) + "\n")
    except OSError as exc:
        print(f"pathcrystal: cannot write export: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(f"{len(crystal)} nodes -> {path}")
    return EXIT_PASS


def cmd_cache(args: argparse.Namespace) -> int:
    cache = Cache(args.cache_dir)
    if args.action == "clear":
        print(f"removed {cache.clear()} entries from {cache.root}")
    else:
        print(json.dumps(cache.status(), sort_keys=True))
    return EXIT_PASS


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "cache":
            if args.cache_dir is None:
                args.cache_dir = str(default_root())
            return cmd_cache(args)
        args = resolve(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_export(args)
    except UsageError as exc:
        print(f"pathcrystal: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
