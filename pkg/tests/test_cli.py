import json
import shutil
import subprocess

import pytest

from frkit import __version__
from frkit.cli import main
from frkit.lp_fr import LinearSet, all_ones, fra_minimal
from frkit.sat_reduce import complete_cnf, three_variable_cnfs
from frkit.sdp_fr import FRSequenceSDP, SdpProblem, build_sequence, notminex, SdpExposingVector


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def write(path, data):
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return path


@pytest.fixture
def allone_file(tmp_path):
    return write(tmp_path / "allone.json", all_ones(2, 3).to_json())


@pytest.fixture
def notminex_files(tmp_path):
    P = notminex()
    steps = [SdpExposingVector.from_y(P, y) for y in ([0, 0, 1.0], [1.0, 0, 0])]
    seq = build_sequence(P, steps)
    return write(tmp_path / "p.json", P.to_json()), write(tmp_path / "s.json", seq.to_json())


def test_lp_analyze(capsys, allone_file):
    code, rep = run(capsys, "lp", "analyze", allone_file, "--brute")
    assert code == 0
    assert rep["command"] == "lp analyze" and rep["version"] == __version__
    assert (rep["result"]["msd"], rep["result"]["sd"], rep["result"]["brute_force"]) == (4, 1, 4)
    assert rep["result"]["minimal_cone"] == [1, 2, 3, 4, 5, 6]


def test_lp_analyze_slater(capsys, tmp_path):
    path = write(tmp_path / "s.json", LinearSet.from_rows([[1, -1]], [0]).to_json())
    code, rep = run(capsys, "lp", "analyze", path)
    assert code == 0 and rep["result"]["msd"] == 0


def test_lp_verify(capsys, tmp_path, allone_file):
    L = all_ones(2, 3)
    seq = fra_minimal(L).to_json()
    good = write(tmp_path / "seq.json", seq)
    code, rep = run(capsys, "lp", "verify", allone_file, good)
    assert code == 0 and rep["result"]["valid"] and rep["result"]["minimal"]
    seq["steps"][1]["w"] = ["0"] * L.n
    bad = write(tmp_path / "bad.json", seq)
    code, rep = run(capsys, "lp", "verify", allone_file, bad)
    assert code == 1 and not rep["result"]["valid"]


def test_sdp_verify(capsys, notminex_files):
    code, rep = run(capsys, "sdp", "verify", *notminex_files)
    assert code == 0
    assert rep["result"]["valid"] and rep["result"]["length"] == 2
    assert rep["result"]["rank_drops"] == [2, 1]


def test_sdp_verify_tampered(capsys, tmp_path, notminex_files):
    p, s = notminex_files
    data = json.loads(s.read_text())
    data["steps"][0]["y"] = [0.0, -1.0, 0.0]
    data["steps"][0].pop("W", None)
    bad = write(tmp_path / "bad.json", data)
    code, rep = run(capsys, "sdp", "verify", p, bad)
    assert code == 1 and not rep["result"]["valid"]


def test_sdp_lowrank_worst_case(capsys, tmp_path):
    out = tmp_path / "seq.json"
    code, rep = run(capsys, "sdp", "lowrank", "--worst-case", 4, "--ranks", "1", "--emit", out)
    assert code == 0 and rep["result"]["length"] == 3
    assert len(rep["result"]["residuals"]) == 3
    P = SdpProblem.from_json(run(capsys, "sdp", "worst-case", 4)[1]["result"]["instance"])
    from frkit.sdp_fr import verify_sequence_sdp
    seq = FRSequenceSDP.from_json(json.loads(out.read_text()), P)
    assert verify_sequence_sdp(P, seq).valid


def test_sat_certify_and_sequence(capsys, tmp_path):
    cnf = write(tmp_path / "c.cnf", three_variable_cnfs(2)[0].to_dimacs())
    code, rep = run(capsys, "sat", "certify", cnf)
    assert code == 0
    r = rep["result"]
    assert r["satisfiable"] and r["msd"] >= r["d"] == 11 and r["witness_valid"]
    code, rep = run(capsys, "sat", "sequence", cnf, "--assign", "0,0,1")
    assert code == 0 and rep["result"]["length"] == 11
    assert rep["result"]["steps"][:3] == ["A_1", "A_2", "A_6"]
    code, _ = run(capsys, "sat", "sequence", cnf, "--assign", "1,1,1,1")
    assert code == 2


def test_sat_reduce(capsys, tmp_path):
    cnf = write(tmp_path / "c.cnf", complete_cnf().to_dimacs())
    code, rep = run(capsys, "sat", "reduce", cnf, "--no-duplicate")
    assert code == 0
    assert rep["result"]["meta"] == {"p": 3, "q": 8, "q_tilde": 8, "d": 11}
    assert (rep["result"]["n"], rep["result"]["m"]) == (49, 14)


def test_sat_reduce_trivialized(capsys, tmp_path):
    cnf = write(tmp_path / "c.cnf", "p cnf 3 1\n1 2 -3 0\n")
    code, rep = run(capsys, "sat", "reduce", cnf)
    assert code == 0 and rep["result"]["trivialized"]


@pytest.mark.parametrize("argv, code", [
    (["lp", "analyze", "missing.json"], 2),
    (["lp", "analyze"], 2),
    (["sdp", "lowrank", "--worst-case", "1"], 2),
    (["sdp", "lowrank", "--worst-case", "3", "--ranks", "0"], 2),
    (["lp", "analyze", "x.json", "--eig-tol", "-1"], 2),
    (["frobnicate"], 2),
])
def test_input_errors(capsys, argv, code):
    assert main(argv) == code


def test_budget_exit(capsys, tmp_path):
    cnf = write(tmp_path / "c.cnf", three_variable_cnfs(2)[0].to_dimacs())
    assert main(["sat", "certify", str(cnf), "--budget", "4"]) == 4


def test_bad_dimacs_exit(capsys, tmp_path):
    cnf = write(tmp_path / "c.cnf", "p cnf 3 1\n1 2 0\n")
    assert main(["sat", "certify", str(cnf)]) == 2


def _strip(rep):
    rep = dict(rep)
    rep.pop("timings")
    return rep


def test_determinism_modulo_timings(capsys):
    a = run(capsys, "sdp", "lowrank", "--worst-case", 5, "--seed", 3)[1]
    b = run(capsys, "sdp", "lowrank", "--worst-case", 5, "--seed", 3)[1]
    assert _strip(a) == _strip(b)


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("FR_SEED", "17")
    assert run(capsys, "sdp", "worst-case", 3)[1]["config"]["seed"] == 17
    assert run(capsys, "sdp", "worst-case", 3, "--seed", 5)[1]["config"]["seed"] == 5
    monkeypatch.setenv("FR_SEED", "nope")
    assert main(["sdp", "worst-case", "3"]) == 2


def test_output_file(capsys, tmp_path, allone_file):
    out = tmp_path / "r.json"
    assert main(["lp", "analyze", str(allone_file), "-o", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["result"]["msd"] == 4


def test_roundtrip_of_emitted_files(capsys, tmp_path):
    inst = tmp_path / "inst.json"
    cnf = write(tmp_path / "c.cnf", three_variable_cnfs(3)[0].to_dimacs())
    assert main(["sat", "reduce", str(cnf), "--emit", str(inst)]) == 0
    data = json.loads(inst.read_text())
    P = SdpProblem.from_json(data)
    assert P.to_json() == {k: v for k, v in data.items() if k != "meta"}
    L = all_ones(3, 2)
    assert LinearSet.from_json(json.loads(json.dumps(L.to_json()))) == L


@pytest.mark.skipif(shutil.which("frkit") is None, reason="console script not installed")
def test_console_script(allone_file):
    proc = subprocess.run(["frkit", "lp", "analyze", str(allone_file)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["msd"] == 4
