import json
import subprocess
import sys

from ucdnf import cli
from ucdnf.boolfun import PartialFunction, read_pbf, write_pbf
from ucdnf.hex import HexInput, multi_spiral
from ucdnf.hypergraph import Colouring, Hypergraph, read_hg, write_col, write_hg


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_eah_graph(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "eah-graph", "--n", 5, "--out", tmp_path / "g")
    assert code == 0
    G = read_hg(tmp_path / "g.hg")
    assert G.vertex_count == 25 and len(G) == 25
    side = json.loads((tmp_path / "g.hg.json").read_text())
    assert side["seed"] == 0 and side["edges"] == 25


def test_gen_hex_materialized(tmp_path, capsys):
    code, _, _ = run(capsys, "gen", "hex", "--n", 3, "--materialize", "--out", tmp_path / "h")
    assert code == 0
    f = read_pbf(tmp_path / "h.pbf")
    assert f.n == 9 and f.table.size == 512


def test_gen_spiral_multi(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "spiral-multi", "--n", 4, "--out", tmp_path / "s")
    assert code == 0
    assert json.loads(out)["gates"]["star"]
    assert HexInput.read(tmp_path / "s.mat") == multi_spiral(4)[0]


def test_gen_eah_fn_n2(tmp_path, capsys):
    code, _, _ = run(capsys, "gen", "eah-fn", "--n", 2, "--size-factor", 0.5, "--out", tmp_path / "e")
    assert code == 0 and read_pbf(tmp_path / "e.pbf").n == 8


def test_measure_uc1_and2(tmp_path, capsys):
    write_pbf(PartialFunction(2, "0001"), tmp_path / "and2.pbf")
    code, out, _ = run(capsys, "measure", "uc1", "--in", tmp_path / "and2.pbf")
    assert code == 0 and json.loads(out)["value"] == 2


def test_measure_adeg_and2(tmp_path, capsys):
    write_pbf(PartialFunction(2, "0001"), tmp_path / "and2.pbf")
    code, out, _ = run(capsys, "measure", "adeg", "--eps", "1/3", "--in", tmp_path / "and2.pbf")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == 1 and doc["extra"]["max_error"] <= 1 / 3 + 1e-6


def test_measure_csigma_hex3(tmp_path, capsys):
    run(capsys, "gen", "hex", "--n", 3, "--materialize", "--out", tmp_path / "h")
    code, out, _ = run(capsys, "measure", "csigma", "--sigma", "notone", "--x", "100100010", "--in", tmp_path / "h.pbf")
    doc = json.loads(out)
    assert code == 0 and doc["exact"] and isinstance(doc["value"], int)


def test_measure_table_render(tmp_path, capsys):
    write_pbf(PartialFunction(2, "0001"), tmp_path / "and2.pbf")
    code, out, _ = run(capsys, "measure", "deg", "--table", "--in", tmp_path / "and2.pbf")
    assert code == 0 and "value" in out and "1" in out


def test_reduce_chain(tmp_path, capsys):
    write_pbf(PartialFunction(2, "*001"), tmp_path / "f.pbf")
    code, out, _ = run(capsys, "reduce", "p2p3", "--in", tmp_path / "f.pbf", "--x", "00", "--out", tmp_path / "r")
    assert code == 0
    code, out, _ = run(capsys, "reduce", "p3p2", "--in", tmp_path / "r.hg", "--col", tmp_path / "r.col", "--out", tmp_path / "back")
    doc = json.loads(out)
    assert code == 0 and doc["monotone"] and doc["x_is_star"]
    code, out, _ = run(capsys, "reduce", "p2p1", "--in", tmp_path / "f.pbf", "--k", 1, "--materialize", "--out", tmp_path / "cs")
    assert code == 0 and json.loads(out)["instance"]["arity"] == 2 + 2 * 4


def test_reduce_p1p2_with_cover(tmp_path, capsys):
    write_pbf(PartialFunction(2, "0111"), tmp_path / "or.pbf")
    (tmp_path / "u.txt").write_text("1*\n01\n")
    code, out, _ = run(capsys, "reduce", "p1p2", "--in", tmp_path / "or.pbf", "--cover", tmp_path / "u.txt", "--out", tmp_path / "pl")
    assert code == 0 and json.loads(out)["C0(f)"] == 2
    (tmp_path / "bad.txt").write_text("1*\n*1\n")
    code, _, err = run(capsys, "reduce", "p1p2", "--in", tmp_path / "or.pbf", "--cover", tmp_path / "bad.txt")
    assert code == 2 and "INVALID_COVER" in err


def test_reduce_p3p2_not_intersecting(tmp_path, capsys):
    write_hg(Hypergraph(2, [{1}, {2}]), tmp_path / "g.hg")
    write_col(Colouring("01"), tmp_path / "g.col")
    code, _, _ = run(capsys, "reduce", "p3p2", "--in", tmp_path / "g.hg", "--col", tmp_path / "g.col", "--out", tmp_path / "o")
    assert code == 2


def test_verify_commands(capsys):
    code, out, _ = run(capsys, "verify", "fact1", "--n", 3, "--random-n4", 0)
    assert code == 0 and json.loads(out)["report"]["functions"] == 256
    code, out, _ = run(capsys, "verify", "pairwise", "--n", 13)
    assert code == 0 and json.loads(out)["report"]["primes"] == [2, 3, 5, 7, 11, 13]


def test_verify_box_single_file(tmp_path, capsys):
    write_pbf(PartialFunction(2, "*001"), tmp_path / "f.pbf")
    for which in (1, 3, 4):
        code, out, _ = run(capsys, "verify", "box", "--which", which, "--in", tmp_path / "f.pbf")
        assert code == 0, which


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "gen", "bogus", "--n", 3)[0] == 1
    assert run(capsys, "measure")[0] == 1
    assert run(capsys, "report", "nope")[0] == 1
    assert run(capsys, "gen", "eah-graph", "--n", 9, "--out", tmp_path / "x")[0] == 2
    (tmp_path / "bad.pbf").write_text("n=2\n01\n")
    assert run(capsys, "measure", "c", "--in", tmp_path / "bad.pbf")[0] == 2
    write_pbf(PartialFunction(2, "*001"), tmp_path / "f.pbf")
    assert run(capsys, "measure", "uc1", "--in", tmp_path / "f.pbf")[0] == 2
    code, _, err = run(capsys, "gen", "hex", "--n", 6, "--materialize", "--out", tmp_path / "big")
    assert code == 3


def test_verify_exit_4_on_failed_check(monkeypatch, capsys):
    from ucdnf import suites

    monkeypatch.setattr(suites, "pairwise_suite", lambda primes: {"pass": False})
    assert run(capsys, "verify", "pairwise")[0] == 4


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("UCDNF_THREADS", "3")
    a = run(capsys, "verify", "fact1", "--random-n4", 20)[1]
    monkeypatch.setenv("UCDNF_THREADS", "1")
    b = run(capsys, "verify", "fact1", "--random-n4", 20)[1]
    assert a == b
    monkeypatch.setenv("UCDNF_THREADS", "many")
    assert run(capsys, "verify", "pairwise")[0] == 2


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "ucdnf.cli", "verify", "pairwise", "--n", "5"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["pass"]
