import csv
import io
import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from oracles import pi_bounds
from sumcert.cli import ReportRecord, main
from sumcert.numeric_core import PrecisionContext
from sumcert.sum_rules import RULES, evaluate_sum_rule, hybrid_bound_eq9

FAST = ["--width", "1e-5"]
RECORD_FIELDS = list(ReportRecord.__dataclass_fields__)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def ulp(x: Fraction, digits: int) -> Fraction:
    e = math.floor(math.log10(abs(x))) if x else 0
    return Fraction(10) ** (e - digits + 1) * 10


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "eq9", *FAST, "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert list(rec) == RECORD_FIELDS
    assert rec["rule_id"] == "eq9"
    assert rec["strict_less"] is True
    assert rec["claimed_exact"] == "1"
    assert rec["bound_name"] == "S_7"
    s7 = hybrid_bound_eq9(7)
    assert Fraction(rec["bound_value"]["lo"]) <= s7.lo and s7.hi <= Fraction(rec["bound_value"]["hi"])
    assert Fraction(rec["deficit"]["lo"]) > 0
    assert rec["digits"] == 50 and rec["cutoff_M"] >= 64


def test_verify_strings_round_trip_within_one_ulp(capsys):
    code, out, _ = run(capsys, "verify", "eq9", *FAST, "--format", "json", "--digits", "40")
    rec = json.loads(out)
    v = evaluate_sum_rule(RULES["eq9"], "1e-5", PrecisionContext(40))
    for key, enc in (("discrete_sum", v.discrete_sum), ("deficit", v.deficit)):
        lo, hi = Fraction(rec[key]["lo"]), Fraction(rec[key]["hi"])
        assert lo <= enc.lo and enc.hi <= hi
        assert enc.lo - lo <= ulp(enc.lo, 40) and hi - enc.hi <= ulp(enc.hi, 40)


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "eq6", *FAST, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    row = rows[0]
    assert row["rule_id"] == "eq6" and row["strict_less"] == "True"
    assert {"discrete_sum_lo", "discrete_sum_hi", "deficit_lo", "deficit_hi", "cutoff_M"} <= set(row)
    assert Fraction(row["bound_value_hi"]) < Fraction(15, 2)


def test_verify_text_states_the_chain(capsys):
    code, out, _ = run(capsys, "verify", "eq9", *FAST)
    assert code == 0
    chain = out.strip().splitlines()[-1]
    assert chain.startswith("certified: discrete sum <=")
    assert "< S_7 <=" in chain and chain.endswith("< 1")


def test_verify_is_deterministic(capsys):
    reports = []
    for _ in range(2):
        _, out, _ = run(capsys, "verify", "eq9", *FAST, "--format", "json")
        rec = json.loads(out)
        rec.pop("wall_time_ms")
        reports.append(json.dumps(rec))
    assert reports[0] == reports[1]


def test_verify_unknown_rule(capsys):
    code, _, err = run(capsys, "verify", "eq7")
    assert code == 1
    assert "unknown rule" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "eq9", "--digits", "20"],
        ["verify", "eq9", "--width", "abc"],
        ["verify", "eq9", "--width", "-1e-3"],
        ["verify", "eq9", "--format", "xml"],
        ["bound", "eq9-hybrid"],
        ["bound", "eq9-hybrid", "--m", "1"],
        ["bound", "eq9-hybrid", "--m", "two"],
        ["bound", "nonsense"],
        ["zeta", "--s", "1", "--q", "1"],
        ["zeta", "--s", "3", "--q", "-1/2"],
        ["zeta", "--s", "3", "--q", "x"],
        ["control", "--power", "0"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_precision_failure_exit_2(capsys):
    code, _, err = run(capsys, "verify", "eq9", "--width", "1e-60")
    assert code == 2
    assert "precision" in err


def test_bound_eq9_hybrid_values(capsys):
    outs = {}
    for m in (2, 3, 7):
        code, out, _ = run(capsys, "bound", "eq9-hybrid", "--m", str(m), "--format", "json")
        assert code == 0
        outs[m] = json.loads(out)
    assert Fraction(outs[3]["enclosure"]["hi"]) < Fraction(outs[2]["enclosure"]["lo"])
    s7 = hybrid_bound_eq9(7)
    assert Fraction(outs[7]["enclosure"]["lo"]) <= s7.lo and s7.hi <= Fraction(outs[7]["enclosure"]["hi"])


def test_bound_eq6_majorant_routes(capsys):
    code, out, _ = run(capsys, "bound", "eq6-majorant", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["routes_agree"] is True
    assert Fraction(rec["enclosure"]["lo"]) <= Fraction(rec["binomial_route"]["hi"])


def test_zeta_contains_pi_squared_over_six(capsys):
    code, out, _ = run(capsys, "zeta", "--s", "2", "--q", "1", "--digits", "40", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    lo, hi = pi_bounds()
    assert Fraction(rec["enclosure"]["lo"]) <= lo**2 / 6
    assert hi**2 / 6 <= Fraction(rec["enclosure"]["hi"])


def test_zeta_rational_shift(capsys):
    code, out, _ = run(capsys, "zeta", "--s", "3", "--q", "3/2", "--format", "json")
    assert code == 0
    assert json.loads(out)["q"] == "3/2"


def test_control_passes(capsys):
    code, out, _ = run(capsys, "control")
    assert code == 0
    assert "PASS" in out
    code, out, _ = run(capsys, "control", "--format", "json")
    rec = json.loads(out)
    assert Fraction(rec["lhs"]["lo"]) == Fraction(rec["rhs"]["hi"]) == Fraction(-1, 2)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sumcert", "control", "--power", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
