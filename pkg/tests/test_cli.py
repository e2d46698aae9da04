import csv
import io
from pathlib import Path

import pytest

from dualgeom.cli import parse_G, parse_model, run

FIXTURE = Path(__file__).resolve().parents[1] / "docs" / "fixture.ini"


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def test_bounds_two_sided_ratio_table():
    code, text = call("bounds", "--hyp", "two-sided-ratio", "--A", "2", "--A1", "0",
                      "--n", "3", "--rmax", "5")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["r", "lower", "value", "upper"]
    for r, lo, _, up in rows[1:]:
        assert float(lo) == pytest.approx(1 / float(r), rel=1e-15)
        assert float(up) == pytest.approx(2 / float(r), rel=1e-15)
    assert float(rows[-1][0]) == 5.0


def test_forms_first_example():
    code, text = call("forms", "x1 dx1")
    assert code == 0
    assert text.splitlines()[0] == "closed=yes coclosed=no harmonic=yes"


def test_mono_flat_row():
    code, text = call("mono", "--row", "vi", "--k", "1", "--F", "ppower:2", "--n", "4")
    assert code == 0
    assert text.splitlines()[0] == "lambda=2"


def test_mono_not_applicable_exits_one():
    code, text = call("mono", "--row", "vi", "--k", "1", "--F", "ppower:5", "--n", "4")
    assert code == 1
    assert text.startswith("applicable=no")


def test_mono_vanishing_line():
    code, text = call("mono", "--row", "vi", "--k", "1", "--F", "identity", "--n", "4",
                      "--E", "1,1,0")
    assert code == 0
    assert "little_o=yes consistent=no" in text


def test_growth_table():
    code, text = call("growth", "2,2", "2,3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0]["balanced"] == "yes"
    assert rows[1]["infinite"] == "yes" and rows[1]["balanced"] == "no"


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("hardy", "--p", "4", "--n", "3"), "C=0.00390625"),
        (("costa", "--case", "iii", "--hyp", "flat", "--n", "3", "--t", "0.5"), "C=2.25"),
        (("ckn", "--hyp", "flat", "--a", "0", "--b", "0", "--n", "4"), "C=1.5"),
    ],
    ids=["hardy", "costa", "ckn"],
)
def test_constant_commands(argv, expected):
    code, text = call(*argv)
    assert code == 0
    assert text.splitlines()[0] == expected


def test_ckn_with_model_emits_csv_row():
    code, text = call("ckn", "--hyp", "flat", "--a", "0", "--b", "0", "--n", "4",
                      "--model", "euclidean")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text.split("\n", 1)[1])))
    assert rows[0] == ["id", "C", "lhs", "rhs", "slack", "verdict"]
    assert rows[1][-1] == "pass"


def test_solve_grid_csv():
    code, text = call("solve", "--G=-1", "--T", "2", "--grid", "3")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "t,f,fprime"
    assert len(lines) == 5
    assert float(lines[3].split(",")[1]) == pytest.approx(3.626860407847019, abs=1e-9)


def test_dual_round_trip():
    code, text = call("dual", "--G=1", "--T", "3")
    assert code == 0
    assert text.rstrip().endswith("verdict=pass")


def test_compare_pass_and_certificate(tmp_path):
    path = tmp_path / "cert.csv"
    code, text = call("compare", "--theorem", "sturm", "--G1", "0", "--G2=-1", "--T", "2",
                      "--cert", str(path))
    assert code == 0
    assert "verdict=pass" in text
    assert f"certificate={path}" in text
    assert path.read_text().count("\n") > 10


def test_compare_violated_hypothesis_exits_one():
    code, text = call("compare", "--theorem", "sturm", "--G1=-1", "--G2", "0", "--T", "2")
    assert code == 1
    assert "G2 <= G1 fails" in text


def test_bounds_model_violation_exits_one():
    code, text = call("bounds", "--hyp", "flat-nonpositive", "--n", "3", "--rmax", "2",
                      "--model", "sphere")
    assert code == 1
    assert "hypothesis_error" in text


@pytest.mark.parametrize(
    "argv",
    [
        ("nope",),
        ("forms", "sin(x1) dx1"),
        ("bounds", "--hyp", "no_such", "--n", "3", "--rmax", "1"),
        ("mono", "--row", "vi", "--k", "1", "--F", "weird", "--n", "4"),
        ("bounds", "--hyp", "flat", "--n", "3"),
        ("report", "/nonexistent/file.ini"),
    ],
    ids=["unknown_command", "bad_form", "bad_hypothesis", "bad_F", "missing_arg", "missing_file"],
)
def test_usage_errors_exit_two(argv, capsys):
    code, _ = call(*argv)
    assert code == 2


def test_report_fixture_is_deterministic():
    first = call("report", str(FIXTURE))
    second = call("report", str(FIXTURE))
    assert first == second
    code, text = first
    assert code == 0
    assert text.endswith("# scenarios=14 failed=0 seed=7\n")
    assert "\r" not in text


def test_report_seed_override():
    _, text = call("--seed", "3", "report", str(FIXTURE))
    assert text.endswith("seed=3\n")


def test_report_failure_writes_certificates(tmp_path):
    ini = tmp_path / "bad.ini"
    ini.write_text(
        "[x01_sphere]\ntype = bounds\nmodel = sphere\nn = 3\nhyp = flat_nonpositive\n\n"
        "[x02_flat]\ntype = bounds\nmodel = euclidean\nn = 3\nhyp = flat\n"
    )
    out = tmp_path / "certs"
    code, text = call("report", str(ini), "--cert-dir", str(out))
    assert code == 1
    assert "failed=1" in text
    assert (out / "x01_sphere.csv").exists()
    assert not (out / "x02_flat.csv").exists()


def test_report_malformed_file(tmp_path):
    ini = tmp_path / "bad.ini"
    ini.write_text("[a]\ntype = nonsense\n")
    code, _ = call("report", str(ini))
    assert code == 2


@pytest.mark.parametrize(
    "text, r, value",
    [("1", 2.0, 1.0), ("-2/r^2", 2.0, -0.5), ("0.5*r^-1 + 1", 2.0, 1.25)],
)
def test_parse_G(text, r, value):
    G, _ = parse_G(text)
    assert G(r) == pytest.approx(value)


@pytest.mark.parametrize("spec", ["euclidean", "hyperbolic:2", "sphere", "power:1.5"])
def test_parse_model(spec):
    assert parse_model(spec, 3).n == 3
