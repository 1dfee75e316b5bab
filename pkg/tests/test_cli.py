import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ahlfors_maximal.cli import decimal12, parse_grid, run


def call(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr().out


def test_eval_exact_value(capsys):
    code, out = call(capsys, "eval", "--measure", "cantor", "--x", "19/27")
    assert code == 0 and json.loads(out)["exact"] == "5/8"


def test_eval_from_measure_file(capsys, tmp_path):
    path = tmp_path / "cantor.json"
    path.write_text('{"maps": [{"rho": "1/3", "t": "0"}, {"rho": "1/3", "t": "2/3"}], "weights": ["1/2", "1/2"]}')
    code, out = call(capsys, "eval", "--measure", str(path), "--x", "2/3")
    assert code == 0 and json.loads(out)["exact"] == "1/2"


@pytest.mark.parametrize("argv", [
    ["eval", "--x", "0.5"],
    ["eval"],
    ["eval", "--measure", "no-such-file.json", "--x", "1/2"],
    ["contact-scan", "--grid", "0,1"],
    ["eval", "--x", "1/2", "--format", "csv"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2


def test_bad_measure_file_exits_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"maps": [{"rho": "1/2", "t": "0"}, {"rho": "1/2", "t": "1/2"}], "weights": ["1/2", "1/2"]}')
    with pytest.raises(SystemExit) as exc:
        run(["eval", "--measure", str(path), "--x", "1/2"])
    assert exc.value.code == 2


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_integral_and_maximal(capsys):
    code, out = call(capsys, "integral", "--a", "1/3", "--b", "1")
    assert code == 0 and json.loads(out)["average"] == {"lo": "5/8", "hi": "5/8"}
    code, out = call(capsys, "maximal", "--x", "2/3", "--delta", "1")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "detached"
    assert Fraction(rep["value"]["lo"]) >= Fraction(5, 8)


def test_maximal_restricted_infinite_end(capsys):
    code, out = call(capsys, "maximal", "--x", "1/2", "--a", "1/3", "--b", "inf", "--tol", "1/1000")
    assert code == 0 and json.loads(out)["radius_bound"] == "1/6"


def test_gaps_command(capsys):
    code, out = call(capsys, "gaps", "--depth", "3")
    rep = json.loads(out)
    assert code == 0 and len(rep["gaps"]) == 7 and rep["holds"]


def test_image_bound_command(capsys):
    code, out = call(capsys, "image-bound", "--measure", "cantor", "--levels", "2")
    rep = json.loads(out)
    assert code == 0 and rep["holds"] and len(rep["levels"]) == 2


def test_cantor_pattern_command(capsys):
    code, out = call(capsys, "cantor-pattern", "--x", "9/16", "--levels", "4")
    rep = json.loads(out)
    assert code == 0 and rep["scan"]["positions"][0] == 1 and rep["cover"]["exact_match"]


def test_grid_points():
    assert parse_grid("0,1,27")[18] == Fraction(2, 3)
    assert parse_grid("1/3,1,1") == [Fraction(1, 3)]


def test_decimal12():
    assert decimal12(Fraction(2, 3)) == "0.666666666667"
    assert decimal12(Fraction(1)) == "1.000000000000"


def test_contact_scan_rows(capsys):
    code, out = call(capsys, "contact-scan", "--grid", "0,1,27", "--tol", "1/100000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 27
    by_x = {r["x"]: r for r in rows}
    two_thirds = by_x["2/3"]
    assert two_thirds["f_lo"] == two_thirds["f_hi"] == "1/2"
    assert Fraction(two_thirds["M_lo"]) >= Fraction(5, 8) - Fraction(1, 100000)
    for right_end in ("2/9", "2/3", "8/9"):
        assert by_x[right_end]["verdict"] == "detached"
    assert two_thirds["x_dec"] == "0.666666666667"


def test_contact_scan_single_row(capsys):
    code, out = call(capsys, "contact-scan", "--grid", "0,1,1", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 1


def test_verify_covering_exit_0(capsys):
    code, out = call(capsys, "verify", "--suite", "covering", "--measure", "cantor", "--depth", "8", "--seed", "7")
    assert code == 0 and json.loads(out)["holds"]


def test_verify_failure_exits_1(capsys, tmp_path):
    # the induction suite cannot certify a split for an unreachable eps
    code, out = call(capsys, "verify", "--suite", "induction", "--eps", "1/1000000000000000")
    assert code == 1 and not json.loads(out)["holds"]


def test_budget_exhaustion_exits_1(monkeypatch, capsys):
    monkeypatch.setenv("FM_NODE_BUDGET", "5")
    assert run(["gaps", "--depth", "6"]) == 1


def test_output_file_and_module_entry(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "ahlfors_maximal", "eval", "--x", "2/3", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(out.read_text())["exact"] == "1/2"
