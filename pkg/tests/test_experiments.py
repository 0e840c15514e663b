import json
import math

import numpy as np
import pytest

from torus_transport.errors import ValidationError
from torus_transport.experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    SlopeFit,
    describe,
    fit_loglog,
    primes_between,
    random_nonnegative_polynomial,
    run_experiment,
)
from torus_transport.heat import eigen_split_cost, uncertainty_sides
from torus_transport.io import read_table, table_to_csv, to_json
from torus_transport.measures import Cdf, FourierSeries, synthesize_grid
from torus_transport.sequences import quadratic_residue_measure
from torus_transport.transport import wp_circle


# --- fit_loglog ----------------------------------------------------------------


def test_fit_square():
    x = np.array([1.0, 2.0, 5.0, 10.0])
    fit = fit_loglog(x, x ** 2)
    assert isinstance(fit, SlopeFit)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_inverse():
    x = np.array([3.0, 7.0, 11.0, 40.0])
    assert fit_loglog(x, 5 / x).slope == pytest.approx(-1.0, abs=1e-12)
    assert fit_loglog(x, 5 / x).intercept == pytest.approx(math.log(5), abs=1e-12)


def test_fit_against_polyfit():
    rng = np.random.default_rng(0)
    x = np.geomspace(1, 100, 9)
    y = 3 * x ** -0.7 * np.exp(0.05 * rng.normal(size=9))
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    fit = fit_loglog(x, y)
    assert fit.slope == pytest.approx(slope, rel=1e-10)
    assert fit.intercept == pytest.approx(intercept, rel=1e-10)
    assert 0 <= fit.r_squared <= 1


@pytest.mark.parametrize(
    "xs, ys",
    [([1, 2], [1, 2]), ([1, 2, 3], [1, 0, 2]), ([1, -2, 3], [1, 2, 3]), ([2, 2, 2], [1, 2, 3]), ([1, 2, 3], [1, np.nan, 2])],
)
def test_fit_rejects(xs, ys):
    with pytest.raises(ValidationError):
        fit_loglog(xs, ys)


# --- config ------------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig("nope")
    with pytest.raises(ValidationError):
        ExperimentConfig("eigen", format="xml")
    with pytest.raises(ValidationError):
        ExperimentConfig("eigen", {"primes": [3]})


def test_config_defaults_and_seed():
    cfg = ExperimentConfig("uncertainty", {"n": [1, 2]})
    r = cfg.resolved()
    assert r["seed"] == 42
    assert r["n"] == [1, 2]
    assert r["family"] == "sin"


def test_every_experiment_has_manifest():
    for name in EXPERIMENTS:
        man = describe(name)
        assert man["experiment"] == name
        assert "description" in man and "defaults" in man
        json.dumps(man)


def test_primes_between():
    assert primes_between(1, 20) == [3, 5, 7, 11, 13, 17, 19]
    assert primes_between(24, 28) == []


def test_empty_range_rejected():
    with pytest.raises(ValidationError):
        run_experiment(ExperimentConfig("eigen", {"n": []}))


# --- experiments reproduce library calls -------------------------------------------


def test_quadres_rows_match_library():
    res = run_experiment(ExperimentConfig("quadres", {"primes": [101, 103, 107, 109]}))
    for row in res.rows:
        mu = quadratic_residue_measure(row["p"])
        assert row["W2_exact"] == wp_circle(mu, Cdf.uniform(), 2).cost
        assert row["W2_exact"] <= row["h_minus_one_bound"]
    assert res.fit is not None
    assert res.checks["peyre_violations"] == 0


def test_eigen_rows_match_library():
    res = run_experiment(ExperimentConfig("eigen", {"n": [1, 2, 4, 8]}))
    for row in res.rows:
        assert row["cost"] == eigen_split_cost(row["n"], 1.0)
    assert res.fit.slope == pytest.approx(-1.0, abs=0.01)


def test_uncertainty_sin_rows():
    res = run_experiment(ExperimentConfig("uncertainty", {"n": [1, 5, 9]}))
    for row in res.rows:
        assert row["ratio"] == uncertainty_sides(FourierSeries.sine(row["n"])).ratio
    assert res.checks["ratio_spread"] < 1e-6


@pytest.mark.parametrize("family", ["perturbed", "random"])
@pytest.mark.parametrize("kind", ["roots", "critical"])
def test_uncertainty_other_families(family, kind):
    res = run_experiment(ExperimentConfig("uncertainty", {"n": [3, 8], "family": family, "kind": kind}))
    assert all(r["ratio"] > 0 for r in res.rows)


def test_uncertainty_unknown_family():
    with pytest.raises(ValidationError):
        run_experiment(ExperimentConfig("uncertainty", {"n": [2], "family": "cosine"}))


def test_kronecker_small():
    res = run_experiment(ExperimentConfig("kronecker", {"N": [128, 256, 512]}))
    assert [r["N"] for r in res.rows] == [128, 256, 512]
    assert res.checks["N_star_disc_vs_logN_slope"] is not None


def test_heat_modes():
    two = run_experiment(ExperimentConfig("heat", {"n": [2, 4, 8]}))
    assert two.checks["violations"] == 0
    assert two.checks["C"] <= 10
    plan = run_experiment(ExperimentConfig("heat", {"mode": "plan", "t": [1e-3, 1e-2, 1e-1], "grid": 512}))
    assert plan.checks["scaled_max_over_min"] <= 5
    with pytest.raises(ValidationError):
        run_experiment(ExperimentConfig("heat", {"n": [1, 2]}))


@pytest.mark.parametrize("family", ["dirichlet", "random"])
def test_littlewood(family):
    res = run_experiment(ExperimentConfig("littlewood", {"K": [16, 32], "family": family}))
    assert all(r["ratio"] > 0 for r in res.rows)


def test_sandwich_small():
    res = run_experiment(ExperimentConfig("sandwich", {"count": 5, "degree": 8, "grid": 1024, "quantization": 512}))
    assert len(res.rows) == 5
    assert res.checks["lower_violations"] == 0
    assert res.checks["upper_violations"] == 0
    assert res.checks["peyre_violations"] == 0


def test_random_nonnegative_polynomial_is_probability_density():
    rng = np.random.default_rng(1)
    for deg in (1, 5, 30):
        s = random_nonnegative_polynomial(rng, deg)
        assert s[0] == pytest.approx(1.0)
        assert np.min(synthesize_grid(s, 64 * deg + 64).samples) > 0


# --- serialization ------------------------------------------------------------------


def test_csv_and_json_output(tmp_path):
    res = run_experiment(ExperimentConfig("eigen", {"n": [1, 2, 3]}))
    text = table_to_csv(res.rows, res.columns, res.footer())
    assert text.startswith("# schema=1\n")
    path = tmp_path / "t.csv"
    path.write_text(text)
    cols, rows = read_table(path)
    assert cols == res.columns
    assert float(rows[1]["cost"]) == res.rows[1]["cost"]
    payload = json.loads(to_json(res.to_dict()))
    assert payload["schema"] == 1
    assert payload["fit"]["slope"] == res.fit.slope


def test_json_nan_becomes_null():
    assert json.loads(to_json({"x": float("nan"), "y": [np.float64(1.5)]})) == {"schema": 1, "x": None, "y": [1.5]}


def test_read_table_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# schema=1\n")
    with pytest.raises(ValidationError):
        read_table(path)
