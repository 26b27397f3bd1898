import json

import pytest

from riglab.cli import main
from riglab.exact import rank_exact, read_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def jrun(capsys, *argv):
    code, out = run(capsys, "--json", *argv)
    return code, json.loads(out)


@pytest.fixture
def h4(tmp_path, capsys):
    path = tmp_path / "h4.mat"
    assert run(capsys, "gen", "--sylvester", "2", "--out", str(path))[0] == 0
    return path


def test_gen_and_rank(h4, capsys):
    code, js = jrun(capsys, "rank", "--matrix", str(h4))
    assert code == 0 and js["rank_exact"] == 4 and js["rank_numerical"] == 4


def test_bounds(capsys):
    code, js = jrun(capsys, "bounds", "--n", "4", "--r", "2", "--theta", "1")
    assert code == 0
    vals = {b["name"]: b for b in js["bounds"]}
    assert vals["thm3_relaxed"]["value_rational"] == "16/7"
    assert vals["thm2_rigidity"]["value_rational"] == "2"
    code, out = run(capsys, "bounds", "--n", "4", "--r", "3")
    assert code == 0 and "thm2_rigidity" in out


def test_verify_submatrix(capsys):
    code, js = jrun(capsys, "verify-submatrix", "--k", "2")
    assert code == 0 and js["total_checked"] == 225 and js["ok"]
    code, js = jrun(capsys, "verify-submatrix", "--k", "3", "--mode", "sampled",
                    "--samples", "500", "--seed", "1")
    assert code == 0 and js["total_checked"] == 500


def test_construct_and_protocol_and_spectral(h4, tmp_path, capsys):
    shifted = tmp_path / "shift.mat"
    code, js = jrun(capsys, "construct", "--matrix", str(h4), "--shift", "--out", str(shifted))
    assert code == 0 and js["rank_exact"] == 2 and js["weight"] == 4
    assert rank_exact(read_matrix(shifted)) == 2

    zo = tmp_path / "zo.mat"
    code, js = jrun(capsys, "construct", "--k", "2", "--zero-outside", "--rows", "0,1",
                    "--cols", "0,1,2,3", "--out", str(zo))
    assert code == 0 and js["weight"] == 8 and all(js["claims_checked"].values())

    code, js = jrun(capsys, "protocol", "--matrix", str(h4), "--approx", str(zo))
    assert code == 0 and js["r"] == 2 and js["rank_source"] == "exact"
    assert js["sum_p"] == pytest.approx(2)

    code, js = jrun(capsys, "spectral", "--matrix", str(h4), "--approx", str(zo))
    assert code == 0 and js["sum_squares"] == pytest.approx(2)
    assert js["sqrt_rn"] == pytest.approx(8 ** 0.5)

    code, js = jrun(capsys, "construct", "--k", "3", "--blocks", "1")
    assert code == 0 and js["claims_checked"]["verified"]


def test_oracle_and_search(tmp_path, capsys):
    wit = tmp_path / "w.mat"
    code, js = jrun(capsys, "oracle-r1", "--k", "2", "--witness-out", str(wit))
    assert code == 0 and js["exact"] == 4
    assert rank_exact(read_matrix(wit)) == 1

    code, js = jrun(capsys, "search", "--k", "2", "--r", "2", "--budget", "20",
                    "--restarts", "5", "--iterations", "200")
    assert code == 0 and js["upper"] <= 4 and js["certificate"]["valid"]

    code, js = jrun(capsys, "search", "--k", "2", "--r", "2", "--theta", "1/100",
                    "--budget", "5", "--restarts", "3", "--iterations", "100")
    assert code == 0 and js["upper_infinite"]


def test_reproduce_small(tmp_path, capsys):
    out = tmp_path / "bundle.json"
    code, text = run(capsys, "reproduce", "--samples", "300", "--instances", "30",
                     "--out", str(out))
    assert code == 0 and "total violations: 0" in text
    bundle = json.loads(out.read_text())
    assert bundle["ok"] and bundle["total_violations"] == 0


def test_errors_exit_2(tmp_path, capsys):
    assert main(["rank", "--matrix", str(tmp_path / "missing.mat")]) == 2
    assert main(["bounds", "--n", "4", "--r", "9"]) == 2
    bad = tmp_path / "bad.mat"
    bad.write_text("2 2 0\n1 1 1\n")
    assert main(["rank", "--matrix", str(bad)]) == 2
    capsys.readouterr()
