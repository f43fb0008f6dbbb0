import json

import pytest

from tik.cli import main


@pytest.fixture
def run(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    return _run


def test_digraph_pipeline(run, tmp_path):
    assert run("gen", "--kind", "digraph", "--dims", "3", "--seed", "1", "--planted", "--out-prefix", "g")[0] == 0
    assert run("reduce", "--id", "graph3", "--in", "g_A.json", "g_B.json", "--out-prefix", "r")[0] == 0
    A = json.loads((tmp_path / "r_A.json").read_text())
    arcs = json.loads((tmp_path / "g_A.json").read_text())["arcs"]
    assert A["dims"] == [3, 3, len(arcs)]
    assert run("witness", "transport", "--trace", "r_trace.json", "--witness", "g_witness.json",
               "--out", "w.json")[0] == 0
    code, out, _ = run("verify", "--action", "UUV", "--witness", "w.json", "r_A.json", "r_B.json")
    assert code == 0 and out.strip() == "valid"


def test_planted_uvw2vvw_pipeline(run):
    run("gen", "--dims", "2,2,2", "--field", "R", "--planted", "--group", "o", "--seed", "3", "--out-prefix", "t")
    run("reduce", "--id", "uvw2vvw", "--in", "t_A.json", "t_B.json", "--out-prefix", "s")
    assert run("witness", "transport", "--src-trace", "s_trace.json", "--tgt-trace", "s_trace.json",
               "--witness", "t_witness.json")[0] == 0
    run("witness", "transport", "--trace", "s_trace.json", "--witness", "t_witness.json", "--out", "sw.json")
    assert run("verify", "--action", "UUV", "--witness", "sw.json", "s_A.json", "s_B.json")[0] == 0
    run("witness", "extract", "--trace", "s_trace.json", "--witness", "sw.json", "--out", "back.json")
    assert run("verify", "--action", "UVW", "--witness", "back.json", "t_A.json", "t_B.json")[0] == 0


def test_verify_rejects_wrong_witness(run):
    run("gen", "--dims", "2,2,2", "--field", "F3", "--planted", "--seed", "1", "--out-prefix", "a")
    run("gen", "--dims", "2,2,2", "--field", "F3", "--seed", "2", "--out-prefix", "b")
    code, out, _ = run("verify", "--action", "UVW", "--witness", "a_witness.json", "a_A.json", "b_B.json")
    assert code == 1 and out.strip() == "invalid"


def test_oracle_and_solver_agree(run):
    for seed in range(6):
        planted = ["--planted"] if seed % 2 else []
        run("gen", "--dims", "2,2,2", "--field", "F2", "--seed", str(seed), "--out-prefix", "x", *planted)
        oracle, out, _ = run("oracle", "--action", "UVW", "--groups", "GL:2,GL:2,GL:2", "x_A.json", "x_B.json")
        solver, _, _ = run("polysys", "--solve", "x_A.json", "x_B.json")
        assert oracle == solver
        assert (out.strip() == "none") == (oracle == 1)


def test_polysys_text(run, tmp_path):
    run("gen", "--dims", "2,2,2", "--field", "F7", "--seed", "0", "--out-prefix", "p")
    assert run("polysys", "--format", "magma", "--out", "sys.m", "p_A.json", "p_B.json")[0] == 0
    assert "GroebnerBasis" in (tmp_path / "sys.m").read_text()
    code, out, _ = run("polysys", "--variant", "quadratic", "p_A.json", "p_B.json")
    assert out.startswith("field p=7\nvars ")


def test_atfe_gen_and_polysys(run):
    run("gen", "--kind", "alt-form", "--dims", "4", "--field", "F5", "--planted", "--seed", "2", "--out-prefix", "f")
    code, out, _ = run("polysys", "--problem", "atfe", "f_A.json", "f_B.json")
    assert code == 0 and "vars A_0_0" in out


def test_invariant(run):
    run("gen", "--dims", "2,2,2", "--field", "C", "--seed", "0", "--out-prefix", "c")
    code, out, _ = run("invariant", "--which", "flatdet", "c_A.json")
    assert code == 0 and len(out.split()) == 3
    code, out, _ = run("invariant", "--which", "spectrum", "c_A.json")
    assert out.count("direction") == 3


def test_gen_is_deterministic(run, tmp_path):
    run("gen", "--dims", "2,3,2", "--field", "Q", "--planted", "--seed", "5", "--out-prefix", "one")
    run("gen", "--dims", "2,3,2", "--field", "Q", "--planted", "--seed", "5", "--out-prefix", "two")
    for part in ("A", "B", "witness"):
        assert (tmp_path / f"one_{part}.json").read_bytes() == (tmp_path / f"two_{part}.json").read_bytes()


def test_error_codes(run, tmp_path, monkeypatch):
    (tmp_path / "bad.json").write_text("{nope")
    code, _, err = run("invariant", "--which", "flatdet", "bad.json")
    assert code == 2 and err.startswith("error code=input") and err.count("\n") == 1
    code, _, err = run("invariant", "--which", "flatdet", "missing.json")
    assert code == 2
    run("gen", "--dims", "2,2,2", "--field", "F2", "--seed", "0", "--out-prefix", "z")
    monkeypatch.setenv("TIK_CAP", "10")
    code, _, err = run("oracle", "--action", "UVW", "--groups", "GL:2,GL:2,GL:2", "z_A.json", "z_A.json")
    assert code == 3 and err.startswith("error code=cap")
    code, _, err = run("oracle", "--action", "UVW", "--groups", "GL2", "z_A.json", "z_B.json")
    assert code == 2


def test_tolerance_exit_code(run, tmp_path):
    # a unitary witness whose algebra image rescales f by 2 trips the |alpha| = 1 check
    import numpy as np
    from tik import pathalg
    from tik.field import FieldSpec
    from tik.groups import GroupSpec, WitnessTuple
    from tik.tensor import ActionKind, DWayArray
    R = FieldSpec.R()
    f = DWayArray(R, np.array([[1.0, 0.5], [0.0, 1.0]]))
    _, ta = pathalg.reduce_d_to_3(f)
    _, tb = pathalg.reduce_d_to_3(f.scale(0.5))
    n = len(ta["basis"])
    w = WitnessTuple(ActionKind.UUUstar, [np.eye(n)], [GroupSpec("O", n, R)])
    (tmp_path / "t.json").write_text(json.dumps({"src": ta.to_dict(), "tgt": tb.to_dict()}))
    (tmp_path / "w.json").write_text(json.dumps(w.to_dict()))
    code, _, err = run("witness", "extract", "--trace", "t.json", "--witness", "w.json")
    assert code == 4 and err.startswith("error code=tolerance")


def test_classical_reduce_needs_groups(run):
    run("gen", "--dims", "1,1,1", "--field", "F3", "--seed", "0", "--out-prefix", "k")
    assert run("reduce", "--id", "classical2gl", "--in", "k_A.json")[0] == 2
    assert run("reduce", "--id", "classical2gl", "--in", "k_A.json", "--groups", "O:1,O:1,O:1")[0] == 0
