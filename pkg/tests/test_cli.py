from __future__ import annotations

import json
import logging
import time

import pytest

from pathcrystal import cli
from pathcrystal.affine import FAIL
from pathcrystal.cache import Cache
from pathcrystal.crystalgraph import Crystal
from pathcrystal.pathspace import Path, lambda0
from pathcrystal.rootsystem import build_root_system


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def load(path):
    return json.loads(path.read_text())


def test_verify_pass_and_report(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", 2, "--thm", 3, "--nodes", "1,2", "--out", tmp_path)
    assert code == cli.EXIT_PASS
    assert out.startswith("PASS theorem 3 A2 nodes=1,2 lhs=9 rhs=9")
    rep = load(tmp_path / "thm3_A2_1-2.json")
    assert rep["lhs_count"] == rep["rhs_count"] == 9
    assert (tmp_path / "thm3_A2_1-2.txt").read_text().startswith("PASS")


def test_verify_type_label_form(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--type", "A1", "--thm", 1, "--nodes", "1,1", "--out", tmp_path)
    assert code == 0 and "lhs=4" in out
    code, _, err = run(capsys, "verify", "--type", "A1", "--rank", 2, "--nodes", "1", "--out", tmp_path)
    assert code == cli.EXIT_USAGE and "conflicts" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--type", "F", "--rank", "4", "--thm", "3", "--nodes", "1"],
        ["verify", "--type", "E", "--rank", "6", "--nodes", "2"],
        ["verify", "--rank", "2", "--nodes", "1"],
        ["verify", "--type", "A", "--rank", "2"],
        ["verify", "--type", "Q", "--rank", "2", "--nodes", "1"],
        ["verify", "--type", "A", "--rank", "2", "--nodes", "1", "--budget", "0"],
        ["verify", "--type", "A", "--rank", "1", "--thm", "4", "--nodes", "1,1"],
        ["verify", "--type", "A", "--rank", "2", "--thm", "2", "--nodes", "1"],
        ["verify", "--bogus"],
        ["export", "--type", "A", "--rank", "2"],
        ["export", "--type", "A", "--rank", "2", "--weight", "1,0", "--nodes", "1"],
        [],
    ],
)
def test_usage_errors(argv, tmp_path, capsys):
    code, _, _ = run(capsys, *argv, *(["--out", tmp_path] if argv[:1] in (["verify"], ["export"]) and "--bogus" not in argv else []))
    assert code == cli.EXIT_USAGE


def test_inconclusive_exit(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--type", "E", "--rank", 6, "--nodes", "1,1", "--budget", 3, "--out", tmp_path)
    assert code == cli.EXIT_INCONCLUSIVE
    assert out.startswith("INCONCLUSIVE")
    assert "partial" in load(tmp_path / "thm3_E6_1-1.json")


def test_fail_exit(tmp_path, capsys, monkeypatch):
    real = cli.verify_theorem3

    def broken(*args, **kwargs):
        rep = real(*args, **kwargs)
        rep["status"] = FAIL
        return rep

    monkeypatch.setattr(cli, "verify_theorem3", broken)
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", 1, "--nodes", "1", "--out", tmp_path, "--no-cache")
    assert code == cli.EXIT_FAIL and out.startswith("FAIL")


def test_reports_identical_modulo_time(tmp_path, capsys):
    reports = []
    for k in range(2):
        out = tmp_path / str(k)
        run(capsys, "verify", "--type", "A", "--rank", 3, "--nodes", "2,1", "--out", out, "--no-cache")
        rep = load(out / "thm3_A3_2-1.json")
        rep.pop("elapsed_ms")
        reports.append(json.dumps(rep, sort_keys=True, indent=2))
    assert reports[0] == reports[1]
    # the cached run produces the same report too
    run(capsys, "verify", "--type", "A", "--rank", 3, "--nodes", "2,1", "--out", tmp_path / "c")
    run(capsys, "verify", "--type", "A", "--rank", 3, "--nodes", "2,1", "--out", tmp_path / "c")
    rep = load(tmp_path / "c" / "thm3_A3_2-1.json")
    rep.pop("elapsed_ms")
    assert json.dumps(rep, sort_keys=True, indent=2) == reports[0]


def test_cache_hit_speedup_e6(tmp_path, capsys):
    argv = ["verify", "--type", "E", "--rank", 6, "--thm", 3, "--nodes", "1,1,1", "--out", tmp_path]
    t0 = time.perf_counter()
    code, out, _ = run(capsys, *argv)
    cold = time.perf_counter() - t0
    assert code == 0 and "lhs=19683 rhs=19683" in out
    t0 = time.perf_counter()
    code, out, _ = run(capsys, *argv)
    warm = time.perf_counter() - t0
    assert code == 0 and "lhs=19683" in out
    assert warm * 10 < cold, (cold, warm)


def test_cache_clear_corrupt_and_status(tmp_path, capsys, caplog):
    root = tmp_path / "cache"
    argv = ["verify", "--type", "A", "--rank", 2, "--nodes", "1,1", "--out", tmp_path / "r", "--cache-dir", root]
    assert run(capsys, *argv)[0] == 0
    cache = Cache(root)
    entries = cache.entries()
    assert entries
    for entry in entries:
        entry.write_text("{ not json")
    with caplog.at_level(logging.WARNING):
        assert run(capsys, *argv)[0] == 0
    assert any("corrupt" in r.getMessage() for r in caplog.records)
    code, out, _ = run(capsys, "cache", "status", "--cache-dir", root)
    assert code == 0 and json.loads(out)["entries"] > 0
    code, out, _ = run(capsys, "cache", "clear", "--cache-dir", root)
    assert code == 0 and out.startswith("removed")
    cache = Cache(root)
    assert cache.entries() == []
    assert cache.get("0" * 64) is None and cache.misses == 1


def test_no_cache_writes_nothing(tmp_path, capsys):
    root = tmp_path / "cache"
    run(capsys, "verify", "--type", "A", "--rank", 1, "--nodes", "1", "--out", tmp_path, "--cache-dir", root, "--no-cache")
    assert Cache(root).entries() == []


def test_config_file_and_flags_win(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"type": "A", "rank": 2, "nodes": "1", "thm": 1, "out": str(tmp_path / "cfg")}))
    code, out, _ = run(capsys, "verify", "--config", cfg)
    assert code == 0 and out.startswith("PASS theorem 1 A2 nodes=1 ")
    assert (tmp_path / "cfg" / "thm1_A2_1.json").exists()
    code, out, _ = run(capsys, "verify", "--config", cfg, "--nodes", "2,2", "--thm", 3)
    assert code == 0 and out.startswith("PASS theorem 3 A2 nodes=2,2 ")
    bad = tmp_path / "bad.json"
    bad.write_text("[1]")
    assert run(capsys, "verify", "--config", bad)[0] == cli.EXIT_USAGE
    assert run(capsys, "verify", "--config", tmp_path / "missing.json")[0] == cli.EXIT_USAGE


def test_theorem4_cli(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", 1, "--thm", 4, "--nodes", "1", "--depth", 6, "--out", tmp_path)
    assert code == 0
    assert "scanned=4 dominant=1" in out
    assert load(tmp_path / "thm4_A1_1.json")["depth"] == 6


def test_all_orders(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", 3, "--nodes", "1,2", "--all-orders", "--out", tmp_path)
    assert code == 0
    assert "orderings=2 isomorphic=True" in out


def test_export_weight_dot(tmp_path, capsys):
    code, out, _ = run(capsys, "export", "--type", "A", "--rank", 2, "--weight", "1,0", "--format", "dot", "--out", tmp_path)
    assert code == 0 and out.startswith("3 nodes")
    dot = (tmp_path / "A2_B_1-0.dot").read_text()
    assert dot.count("style=solid") == 2
    # deterministic output
    run(capsys, "export", "--type", "A", "--rank", 2, "--weight", "1,0", "--format", "dot", "--out", tmp_path / "b")
    assert (tmp_path / "b" / "A2_B_1-0.dot").read_text() == dot


def test_export_e6_json_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "export", "--type", "E6", "--weight", "1,0,0,0,0,0", "--out", tmp_path)
    assert code == 0 and out.startswith("27 nodes")
    c = Crystal.from_json(load(tmp_path / "E6_B_1-0-0-0-0-0.json"))
    assert len(c) == 27


def test_export_empty_word(tmp_path, capsys):
    A1 = build_root_system("A", 1)
    seed = Path([lambda0(A1), (0, 1)])
    f = tmp_path / "seed.json"
    f.write_text(json.dumps(seed.to_json()))
    code, out, _ = run(capsys, "export", "--type", "A", "--rank", 1, "--seed-file", f, "--word", "", "--out", tmp_path)
    assert code == 0 and out.startswith("1 nodes")
    assert (tmp_path / "A1_demazure_empty.json").exists()
    code, out, _ = run(capsys, "export", "--type", "A", "--rank", 1, "--seed-file", f, "--word", "1", "--out", tmp_path)
    assert code == 0 and out.startswith("2 nodes")


def test_export_translation(tmp_path, capsys):
    code, out, _ = run(capsys, "export", "--type", "A", "--rank", 2, "--nodes", "1,2", "--format", "dot", "--out", tmp_path)
    assert code == 0 and out.startswith("9 nodes")


def test_export_io_failure(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "export", "--type", "A", "--rank", 1, "--weight", "1", "--out", blocker / "sub")
    assert code == cli.EXIT_FAIL and "cannot write" in err


def test_worked_a1_fixture(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", "--type", "A", "--rank", 1, "--thm", 3, "--nodes", "1", "--out", tmp_path)
    assert code == 0
    rep = load(tmp_path / "thm3_A1_1.json")
    assert rep["seed"] == {"steps": [["1", ["1"]], ["0", ["-1"]]]}
    assert rep["elements"] == [
        {"steps": [["1", ["0"]], ["0", ["-1"]]]},
        {"steps": [["1", ["0"]], ["0", ["1"]]]},
    ]
