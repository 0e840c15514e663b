import json
import subprocess
import sys

import pytest

from torus_transport.cli import main, parse_range
from torus_transport.errors import ValidationError


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# --- ranges --------------------------------------------------------------------


def test_parse_range_forms():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("3,5,9") == [3, 5, 9]
    assert parse_range("7") == [7]
    assert parse_range("10..30", "primes") == [11, 13, 17, 19, 23, 29]
    assert parse_range("128..1024", "pow2") == [128, 256, 512, 1024]
    g = parse_range("1e-4..1e-1", "geom")
    assert len(g) == 13 and g[0] == pytest.approx(1e-4) and g[-1] == pytest.approx(1e-1)


@pytest.mark.parametrize("text, walk", [("5..1", "int"), ("a..b", "int"), ("x,y", "int"), ("24..28", "primes"), ("0..1", "geom")])
def test_parse_range_rejects(text, walk):
    with pytest.raises(ValidationError):
        parse_range(text, walk)


# --- experiment --------------------------------------------------------------------


def test_experiment_csv(capsys):
    code, out, _ = run(["experiment", "eigen", "--n", "1..4"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# schema=1"
    assert lines[1] == "n,cost,n_times_cost,mass"
    assert len([ln for ln in lines if not ln.startswith("#")]) == 5
    assert any(ln.startswith("# fit slope=") for ln in lines)


def test_experiment_json(capsys):
    code, out, _ = run(["experiment", "quadres", "--primes", "101..113", "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert [r["p"] for r in payload["rows"]] == [101, 103, 107, 109, 113]


def test_experiment_describe(capsys):
    code, out, _ = run(["experiment", "kronecker", "--describe"], capsys)
    assert code == 0
    man = json.loads(out)
    assert man["power_law"]["slope"] == -1.0


def test_experiment_out_file(tmp_path, capsys):
    path = tmp_path / "eigen.csv"
    code, out, _ = run(["experiment", "eigen", "--n", "1..3", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert path.read_text().startswith("# schema=1")


def test_experiment_flag_not_applicable(capsys):
    code, _, err = run(["experiment", "eigen", "--primes", "3..7"], capsys)
    assert code == 2
    assert "does not apply" in err


def test_experiment_bad_range(capsys):
    code, _, _ = run(["experiment", "eigen", "--n", "9..2"], capsys)
    assert code == 2


def test_unknown_experiment_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "bogus"])
    assert exc.value.code == 2


def test_p_and_seed_flags(capsys):
    code, out, _ = run(["experiment", "eigen", "--n", "1..3", "--p", "2"], capsys)
    assert code == 0
    code2, out2, _ = run(["experiment", "uncertainty", "--family", "random", "--n", "2..4", "--seed", "7"], capsys)
    code3, out3, _ = run(["experiment", "uncertainty", "--family", "random", "--n", "2..4", "--seed", "8"], capsys)
    assert code2 == code3 == 0
    assert out2 != out3


# --- ot ------------------------------------------------------------------------------


@pytest.fixture
def atom_files(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("location,weight\n0.0,1.0\n")
    b.write_text("location,weight\n0.75,1.0\n")
    return a, b


def test_ot_circle_and_interval(atom_files, capsys):
    a, b = atom_files
    code, out, _ = run(["ot", "--mu", str(a), "--nu", str(b), "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["cost"] == pytest.approx(0.25)
    code, out, _ = run(["ot", "--mu", str(a), "--nu", str(b), "--interval", "--format", "json"], capsys)
    assert json.loads(out)["result"]["cost"] == pytest.approx(0.75)


def test_ot_oracle_and_plan(atom_files, tmp_path, capsys):
    a, b = atom_files
    plan = tmp_path / "plan.csv"
    code, out, _ = run(["ot", "--mu", str(a), "--nu", str(b), "--p", "2", "--oracle", "--plan-out", str(plan)], capsys)
    assert code == 0
    assert plan.read_text().splitlines()[0] == "source,target,mass"
    header = out.splitlines()[1].split(",")
    assert "oracle_cost" in header


def test_ot_against_uniform(atom_files, capsys):
    a, _ = atom_files
    code, out, _ = run(["ot", "--mu", str(a), "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["cost"] == pytest.approx(0.25)


def test_ot_missing_file(tmp_path, capsys):
    code, _, err = run(["ot", "--mu", str(tmp_path / "missing.csv")], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_ot_mass_mismatch(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("0.1,1.0\n")
    b.write_text("0.2,2.0\n")
    code, _, _ = run(["ot", "--mu", str(a), "--nu", str(b)], capsys)
    assert code == 2


# --- bounds ----------------------------------------------------------------------------


def test_bounds_quadres(capsys):
    code, out, _ = run(["bounds", "--quadres", "101", "--n", "101", "--format", "json"], capsys)
    assert code == 0
    entries = json.loads(out)["entries"]
    for key in ("erdos_turan", "leveque", "peyre_w2", "thm1_p1", "thm1_p2"):
        assert entries[key] >= 0


def test_bounds_kronecker_and_atoms(atom_files, capsys):
    code, out, _ = run(["bounds", "--kronecker", "sqrt2", "--count", "256", "--n", "16"], capsys)
    assert code == 0
    assert out.splitlines()[1].startswith("erdos_turan,")
    a, _ = atom_files
    code, out, _ = run(["bounds", "--atoms", str(a), "--n", "4", "--K", "8", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["entries"]["erdos_turan"] == pytest.approx(0.25 + 1 + 1 / 2 + 1 / 3 + 1 / 4)


def test_bounds_composite_prime(capsys):
    code, _, _ = run(["bounds", "--quadres", "15", "--n", "4"], capsys)
    assert code == 2


# --- fit ----------------------------------------------------------------------------------


def test_fit_roundtrip(tmp_path, capsys):
    table = tmp_path / "eigen.csv"
    assert main(["experiment", "eigen", "--n", "1..8", "--out", str(table)]) == 0
    code, out, _ = run(["fit", "--in", str(table), "--x", "n", "--y", "cost", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["fit"]["slope"] == pytest.approx(-1.0, abs=0.01)


def test_fit_bad_column(tmp_path, capsys):
    table = tmp_path / "eigen.csv"
    main(["experiment", "eigen", "--n", "1..3", "--out", str(table)])
    capsys.readouterr()
    code, _, err = run(["fit", "--in", str(table), "--x", "n", "--y", "nope"], capsys)
    assert code == 2
    assert "nope" in err


# --- installed script ----------------------------------------------------------------------


def test_console_script_exit_codes(tmp_path):
    ok = subprocess.run(
        [sys.executable, "-m", "torus_transport.cli", "experiment", "eigen", "--n", "1..3"],
        capture_output=True,
        text=True,
    )
    assert ok.returncode == 0
    assert ok.stdout.startswith("# schema=1")
    bad = subprocess.run(
        [sys.executable, "-m", "torus_transport.cli", "experiment", "eigen", "--n", "3..1"],
        capture_output=True,
        text=True,
    )
    assert bad.returncode == 2
