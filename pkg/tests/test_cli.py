import json
import subprocess
import sys

import pytest

from ostrobound import report
from ostrobound.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bound_thm1(capsys):
    code, out, _ = run(capsys, "--json", "bound", "thm1", "--fn", "exp1", "--a", "0", "--b", "1", "--x", "0.5", "--s", "1")
    rep = json.loads(out)
    assert code == 0 and rep["holds"] and rep["branch"] == "LessThanOne"
    assert rep["rhs"] == pytest.approx(0.420839287058789, abs=1e-14)
    assert rep["lhs"] == pytest.approx(0.069560557758917, abs=1e-14)
    assert list(rep)[:11] == ["command", "params", "tau", "branch", "psi", "lhs", "rhs", "margin", "holds",
                              "oracle_err", "timings"]


def test_global_flags_after_subcommand(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "bound", "thm2", "--fn", "exp1", "--x", "0.5", "--s", "1", "--q", "2",
                       "--json", "--out", str(path))
    assert code == 0 and out == ""
    text = path.read_text()
    assert report.dumps(json.loads(text)) == text
    assert json.loads(text)["rhs"] == pytest.approx(0.5011443508404565, abs=1e-14)


def test_human_output(capsys):
    code, out, _ = run(capsys, "bound", "mid", "--fn", "exp1", "--s", "1")
    assert code == 0 and "rhs" in out and "LessThanOne" in out


@pytest.mark.parametrize("argv,code,msg", [
    (("bound", "thm1", "--fn", "expdec", "--a", "0", "--b", "1", "--x", "0.5", "--s", "1"), 2,
     "unsupported branch τ>1; try --reflect"),
    (("bound", "thm1", "--fn", "quad", "--x", "0.5"), 2, "|f'(a)| = 0"),
    (("bound", "thm1", "--fn", "exp1", "--x", "1.5"), 1, "outside"),
    (("bound", "thm1", "--fn", "exp1", "--s", "0"), 1, "s must lie in (0, 1]"),
    (("bound", "thm1", "--fn", "nope"), 1, "unknown function id"),
    (("bound", "thm2", "--fn", "exp1"), 1, "needs --q"),
    (("bound", "thm2", "--fn", "exp1", "--q", "1"), 1, "q must exceed 1"),
    (("bound", "corM", "--M", "2"), 2, "unsupported branch"),
    (("bound", "thm1", "--fn", "quad12", "--s", "1"), 2, "hypothesis"),
    (("pdf", "--dist", "tri", "--x", "0.5"), 2, "zero endpoint density"),
    (("pdf", "--dist", "nope", "--x", "0.5"), 1, "unknown distribution"),
    (("integrate", "--fn", "exp1", "--n", "0"), 1, "positive integer"),
])
def test_error_paths(capsys, argv, code, msg):
    got, _, err = run(capsys, *argv)
    assert got == code and msg in err


def test_reflect_flag(capsys):
    code, out, _ = run(capsys, "--json", "bound", "thm1", "--fn", "expdec", "--x", "0.5", "--reflect")
    rep = json.loads(out)
    assert code == 0 and rep["reflected"] and rep["holds"]


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_integrate_classical(capsys):
    code, out, _ = run(capsys, "--json", "integrate", "--fn", "quad", "--a", "0", "--b", "1", "--n", "4",
                       "--classical-K", "2")
    rep = json.loads(out)
    assert code == 0 and rep["approx"] == 0.328125
    assert rep["classical_bound"] == pytest.approx(1 / 192, abs=1e-15)
    assert rep["true_error"] == pytest.approx(1 / 192, abs=1e-15)


def test_integrate_prop1(capsys):
    code, out, _ = run(capsys, "--json", "integrate", "--fn", "exp1", "--n", "2", "--bound", "prop1", "--s", "1")
    rep = json.loads(out)
    assert code == 0 and rep["holds"]
    assert rep["certificate"] == pytest.approx(0.42734700651694, abs=1e-13)
    assert rep["true_error"] == pytest.approx(0.017769111808837, abs=1e-14)
    assert len(rep["per_interval"]) == 2


def test_integrate_csv(capsys):
    code, out, _ = run(capsys, "--csv", "integrate", "--fn", "exp1", "--n", "2", "--bound", "prop2", "--q", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("command,fn,a,b") and lines[1].startswith("integrate,exp1")


def test_pdf(capsys):
    code, out, _ = run(capsys, "--json", "pdf", "--dist", "texp1", "--x", "0.5", "--s", "1")
    rep = json.loads(out)
    assert code == 0 and rep["holds"]
    assert rep["lhs"] == pytest.approx(0.040482, abs=1e-6) and rep["rhs"] == pytest.approx(0.244918, abs=1e-6)
    assert rep["expectation"] == pytest.approx(0.58197670686932642, abs=1e-15)
    code, out, _ = run(capsys, "--json", "pdf", "--dist", "texp1", "--x", "0.5", "--s", "1", "--q", "2")
    assert code == 0 and json.loads(out)["params"]["q"] == 2.0


def test_verify_and_catalog(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemma1", "--fn", "quad")
    assert code == 0 and "[PASS] quad at x=0.5 equals +1/12" in out
    code, out, _ = run(capsys, "--json", "verify", "--suite", "psi-oracle", "--grid", "25")
    rep = json.loads(out)
    assert code == 0 and rep["holds"] and all(c["passed"] for c in rep["checks"])
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and out.splitlines()[0].startswith("exp1")


def test_verify_csv_records(capsys):
    code, out, _ = run(capsys, "--csv", "verify", "--suite", "theorems", "--fn", "exp1")
    assert code == 0 and len(out.splitlines()) > 10


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ostrobound", "bound", "thm1", "--fn", "expdec", "--x", "0.5"],
                         capture_output=True, text=True)
    assert res.returncode == 2 and "try --reflect" in res.stderr
