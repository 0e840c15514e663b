"""Reproducible parameter sweeps built on the library operations.

Every experiment is a function ``params -> rows``; each row records its
inputs together with the computed values, so any row can be recomputed by
calling the library directly. Rows are sorted by the primary parameter
before they are returned, and randomness is drawn from
``numpy.random.default_rng([seed, index])`` so rows do not depend on the
order in which they were computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy import stats

from .bounds import (
    erdos_turan_functional,
    h_minus_one_of_measure,
    littlewood_lhs,
    optimal_erdos_turan,
    peyre_w2_bound,
    thm2_lower_functional,
)
from .discrepancy import PointSet, extreme_discrepancy, lp_discrepancy, star_discrepancy
from .errors import ValidationError
from .heat import (
    critical_point_sides,
    eigen_split_cost,
    heat_kernel_moment,
    heat_plan_cost,
    high_freq_two_step_cost,
    series_l1_norm,
    two_step_time,
    uncertainty_sides,
)
from .measures import (
    Cdf,
    FourierSeries,
    TorusDensity,
    fourier_of_atoms,
    quantile_atoms,
    synthesize_grid,
)
from .sequences import is_prime, kronecker_measure, parse_alpha, quadratic_residue_measure
from .transport import w1_circle, wp_circle

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "SlopeFit",
    "EXPERIMENTS",
    "fit_loglog",
    "run_experiment",
    "describe",
    "random_nonnegative_polynomial",
    "random_mean_zero_polynomial",
    "primes_between",
]

DEFAULT_SEED = 42


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared}


def fit_loglog(xs, ys) -> SlopeFit:
    """Least-squares line through ``(log x, log y)``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise ValidationError("fit_loglog needs at least three (x, y) pairs")
    if np.any(~np.isfinite(x)) or np.any(~np.isfinite(y)) or np.any(x <= 0) or np.any(y <= 0):
        raise ValidationError("fit_loglog needs finite positive data")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise ValidationError("x values must not all be equal")
    res = stats.linregress(lx, ly)
    r2 = 1.0 if np.ptp(ly) == 0 else float(min(max(res.rvalue ** 2, 0.0), 1.0))
    return SlopeFit(float(res.slope), float(res.intercept), r2)


@dataclass(frozen=True)
class ExperimentConfig:
    """Experiment id, parameter overrides, output target and format."""

    name: str
    params: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ValidationError(f"unknown experiment {self.name!r}; choose from {sorted(EXPERIMENTS)}")
        if self.format not in ("csv", "json"):
            raise ValidationError(f"unknown format {self.format!r}")
        unknown = set(self.params) - set(EXPERIMENTS[self.name].defaults)
        if unknown:
            raise ValidationError(f"unknown parameters for {self.name}: {sorted(unknown)}")

    def resolved(self) -> dict:
        merged = dict(EXPERIMENTS[self.name].defaults)
        merged.update({k: v for k, v in self.params.items() if v is not None})
        return merged


@dataclass
class ExperimentResult:
    name: str
    params: dict
    columns: list[str]
    rows: list[dict]
    fit: SlopeFit | None = None
    checks: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.checks = {k: (v.item() if hasattr(v, "item") else v) for k, v in self.checks.items()}

    def footer(self) -> list[str]:
        lines = []
        if self.fit is not None:
            lines.append(
                f"fit slope={self.fit.slope!r} intercept={self.fit.intercept!r} r_squared={self.fit.r_squared!r}"
            )
        for k, v in self.checks.items():
            lines.append(f"check {k}={v!r}")
        return lines

    def to_dict(self) -> dict:
        return {
            "experiment": self.name,
            "params": self.params,
            "columns": self.columns,
            "rows": self.rows,
            "fit": None if self.fit is None else self.fit.to_dict(),
            "checks": self.checks,
        }


@dataclass(frozen=True)
class Experiment:
    run: Callable[[dict], ExperimentResult]
    defaults: dict
    manifest: dict


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in range(max(3, int(lo)), int(hi) + 1) if is_prime(q)]


def _nonempty(name: str, values) -> list:
    values = list(values)
    if not values:
        raise ValidationError(f"parameter {name} is empty")
    return values


def _fit_or_none(xs, ys) -> SlopeFit | None:
    try:
        return fit_loglog(xs, ys)
    except ValidationError:
        return None


def random_mean_zero_polynomial(rng: np.random.Generator, degree: int, decay: float = 0.0) -> FourierSeries:
    """Gaussian complex coefficients for ``1 <= k <= degree``, scaled by ``k^{-decay}``."""
    k = np.arange(1, degree + 1, dtype=float)
    pos = (rng.normal(size=degree) + 1j * rng.normal(size=degree)) / k ** decay
    return FourierSeries.from_positive(0.0, pos)


def random_nonnegative_polynomial(rng: np.random.Generator, degree: int, M: int = 4096) -> FourierSeries:
    """Random probability density that is a trigonometric polynomial of the given degree."""
    base = random_mean_zero_polynomial(rng, degree, decay=1.0)
    low = float(np.min(synthesize_grid(base, max(M, 64 * degree)).samples))
    # lift strictly above the grid minimum, with a random margin
    c0 = -low * (1.0 + rng.random()) + 1e-3
    return FourierSeries.from_positive(c0, base.positive).scaled(1.0 / c0)


def _density(s: FourierSeries, M: int) -> TorusDensity:
    return TorusDensity(np.maximum(synthesize_grid(s, M).samples, 0.0)).normalized()


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def _quadres(params: dict) -> ExperimentResult:
    primes = sorted(set(_nonempty("primes", params["primes"])))
    U = Cdf.uniform()
    rows = []
    for p in primes:
        mu = quadratic_residue_measure(int(p))
        w2 = wp_circle(mu, U, 2.0).cost
        h = h_minus_one_of_measure(mu)
        s = fourier_of_atoms(mu, int(p))
        rows.append(
            {
                "p": int(p),
                "W2_exact": w2,
                "h_minus_one": h,
                "h_minus_one_bound": 2.0 * h,
                "extreme_disc": extreme_discrepancy(PointSet.from_measure(mu)),
                "ET_at_n_eq_p": erdos_turan_functional(s, int(p)),
                "sqrt_p_W2": math.sqrt(p) * w2,
            }
        )
    fit = _fit_or_none([r["p"] for r in rows], [r["W2_exact"] for r in rows])
    checks = {"peyre_violations": sum(r["W2_exact"] > r["h_minus_one_bound"] for r in rows)}
    cols = ["p", "W2_exact", "h_minus_one", "h_minus_one_bound", "extreme_disc", "ET_at_n_eq_p", "sqrt_p_W2"]
    return ExperimentResult("quadres", params, cols, rows, fit, checks)


def _kronecker(params: dict) -> ExperimentResult:
    alpha = parse_alpha(params["alpha"])
    Ns = sorted(set(int(n) for n in _nonempty("N", params["N"])))
    p = float(params["p"])
    U = Cdf.uniform()
    rows = []
    for N in Ns:
        mu = kronecker_measure(alpha, N)
        ps = PointSet.from_measure(mu) if len(mu) == N else PointSet(np.repeat(mu.locations, np.rint(mu.weights * N).astype(int)))
        wp = wp_circle(mu, U, p).cost
        star = star_discrepancy(ps)
        logn = math.log(N) if N > 1 else float("nan")
        rows.append(
            {
                "N": N,
                "Wp_exact": wp,
                "W1_exact": w1_circle(mu, U).cost,
                "star_disc": star,
                "N_star_disc": N * star,
                "L2_disc": lp_discrepancy(ps, 2.0),
                "N_Wp_over_sqrt_logN": N * wp / math.sqrt(logn) if N > 1 else float("nan"),
            }
        )
    fit = _fit_or_none([r["N"] for r in rows], [r["Wp_exact"] for r in rows])
    scaled = [r["N_Wp_over_sqrt_logN"] for r in rows if r["N"] > 1]
    checks = {}
    if scaled:
        checks["scaled_max_over_min"] = max(scaled) / min(scaled)
    if len(rows) >= 2:
        checks["N_star_disc_vs_logN_slope"] = float(
            stats.linregress([math.log(r["N"]) for r in rows], [r["N_star_disc"] for r in rows]).slope
        )
    cols = ["N", "Wp_exact", "W1_exact", "star_disc", "N_star_disc", "L2_disc", "N_Wp_over_sqrt_logN"]
    return ExperimentResult("kronecker", {**params, "alpha": str(params["alpha"])}, cols, rows, fit, checks)


def _uncertainty_series(family: str, n: int, eps: float, rng) -> FourierSeries:
    if family == "sin":
        return FourierSeries.sine(n)
    if family == "perturbed":
        return FourierSeries.sine(1, eps, K=n) + FourierSeries.sine(n)
    if family == "random":
        return random_mean_zero_polynomial(rng, n)
    raise ValidationError(f"unknown family {family!r}")


def _uncertainty(params: dict) -> ExperimentResult:
    family = params["family"]
    kind = params["kind"]
    ns = sorted(set(int(n) for n in _nonempty("n", params["n"])))
    if min(ns) < 1:
        raise ValidationError("n must be >= 1")
    rows = []
    for n in ns:
        rng = np.random.default_rng([int(params["seed"]), n])
        s = _uncertainty_series(family, n, float(params["eps"]), rng)
        sides = uncertainty_sides(s) if kind == "roots" else critical_point_sides(s)
        rows.append({"n": n, "lhs": sides.lhs, "rhs": sides.rhs, "ratio": sides.ratio})
    ratios = [r["ratio"] for r in rows]
    checks = {"ratio_spread": (max(ratios) - min(ratios)) / min(ratios), "min_ratio": min(ratios)}
    return ExperimentResult("uncertainty", params, ["n", "lhs", "rhs", "ratio"], rows, None, checks)


def _eigen(params: dict) -> ExperimentResult:
    ns = sorted(set(int(n) for n in _nonempty("n", params["n"])))
    p = float(params["p"])
    rows = []
    for n in ns:
        cost = eigen_split_cost(n, p)
        rows.append({"n": n, "cost": cost, "n_times_cost": n * cost, "mass": 1.0 / math.pi})
    fit = _fit_or_none([r["n"] for r in rows], [r["cost"] for r in rows])
    return ExperimentResult("eigen", params, ["n", "cost", "n_times_cost", "mass"], rows, fit, {})


def _heat(params: dict) -> ExperimentResult:
    p = float(params["p"])
    if params["mode"] == "plan":
        ts = sorted(set(float(t) for t in _nonempty("t", params["t"])))
        M = int(params["grid"])
        d = TorusDensity.from_function(lambda x: 1.0 + np.cos(2 * np.pi * x), M)
        rows = []
        for t in ts:
            cost = heat_plan_cost(d, t, p)
            rows.append(
                {
                    "t": t,
                    "cost": cost,
                    "moment": heat_kernel_moment(t, p),
                    "cost_p_over_t_p2": cost ** p / t ** (p / 2.0),
                }
            )
        sc = [r["cost_p_over_t_p2"] for r in rows]
        checks = {"scaled_max_over_min": max(sc) / min(sc)}
        return ExperimentResult("heat", params, ["t", "cost", "moment", "cost_p_over_t_p2"], rows, None, checks)

    ns = sorted(set(int(n) for n in _nonempty("n", params["n"])))
    if min(ns) < 2:
        raise ValidationError("two-step sweep needs n >= 2")
    rows = []
    for n in ns:
        s = FourierSeries.sine(n)
        realized, exact = high_freq_two_step_cost(s, p)
        ratio = realized / exact
        rows.append(
            {
                "n": n,
                "t": two_step_time(s, p),
                "realized": realized,
                "exact": exact,
                "ratio": ratio,
                "ratio_over_sqrt_logn": ratio / math.sqrt(math.log(n)),
            }
        )
    C = max(r["ratio_over_sqrt_logn"] for r in rows)
    checks = {"C": C, "violations": sum(r["realized"] < r["exact"] for r in rows)}
    cols = ["n", "t", "realized", "exact", "ratio", "ratio_over_sqrt_logn"]
    return ExperimentResult("heat", params, cols, rows, None, checks)


def _littlewood(params: dict) -> ExperimentResult:
    Ks = sorted(set(int(k) for k in _nonempty("K", params["K"])))
    family = params["family"]
    rows = []
    for K in Ks:
        rng = np.random.default_rng([int(params["seed"]), K])
        if family == "dirichlet":
            pos = np.ones(K, dtype=complex)
        elif family == "random":
            pos = np.exp(2j * np.pi * rng.random(K))
        else:
            raise ValidationError(f"unknown family {family!r}")
        s = FourierSeries.from_positive(0.0, pos)
        lhs = littlewood_lhs(s)
        l1 = series_l1_norm(s)
        rows.append({"K": K, "lhs": lhs, "l1_norm": l1, "ratio": lhs / l1})
    checks = {"max_ratio": max(r["ratio"] for r in rows)}
    return ExperimentResult("littlewood", params, ["K", "lhs", "l1_norm", "ratio"], rows, None, checks)


def _sandwich(params: dict) -> ExperimentResult:
    count = int(params["count"])
    if count < 1:
        raise ValidationError("count must be >= 1")
    M = int(params["grid"])
    q = int(params["quantization"])
    max_deg = int(params["degree"])
    C_lower = float(params["C_lower"])
    U = Cdf.uniform()
    rows = []
    for i in range(count):
        rng = np.random.default_rng([int(params["seed"]), i])
        deg = int(rng.integers(1, max_deg + 1))
        s = random_nonnegative_polynomial(rng, deg, M)
        d = _density(s, M)
        w1 = w1_circle(d, U).cost
        sup = float(np.max(d.samples))
        lower = thm2_lower_functional(s, sup)
        disc = extreme_discrepancy(PointSet.from_measure(quantile_atoms(d, q)))
        n_opt, et = optimal_erdos_turan(s)
        rows.append(
            {
                "index": i,
                "degree": deg,
                "thm2_lower": lower,
                "W1_exact": w1,
                "W2_exact": wp_circle(d, U, 2.0).cost,
                "peyre_w2": peyre_w2_bound(d),
                "ET_opt": et,
                "ET_n": n_opt,
                "extreme_disc_quantized": disc,
                "lower_over_W1": lower / w1,
                "W1_over_disc": w1 / disc,
            }
        )
    checks = {
        "lower_violations": sum(r["thm2_lower"] > C_lower * r["W1_exact"] for r in rows),
        "upper_violations": sum(r["W1_exact"] > 2.0 * r["extreme_disc_quantized"] for r in rows),
        "peyre_violations": sum(r["W2_exact"] > r["peyre_w2"] for r in rows),
        "max_lower_over_W1": max(r["lower_over_W1"] for r in rows),
        "max_W1_over_disc": max(r["W1_over_disc"] for r in rows),
    }
    cols = [
        "index", "degree", "thm2_lower", "W1_exact", "W2_exact", "peyre_w2",
        "ET_opt", "ET_n", "extreme_disc_quantized", "lower_over_W1", "W1_over_disc",
    ]
    return ExperimentResult("sandwich", params, cols, rows, None, checks)


EXPERIMENTS: dict[str, Experiment] = {
    "quadres": Experiment(
        _quadres,
        {"primes": primes_between(101, 997)},
        {
            "description": "W2 of the quadratic-residue measure against dx, with its negative-Sobolev bound",
            "primary": "p",
            "ranges": {"primes": "a..b expands to every prime in [a, b]"},
            "power_law": {"x": "p", "y": "W2_exact", "slope": -0.5, "tolerance": 0.05},
            "gates": ["W2_exact <= h_minus_one_bound for every p"],
        },
    ),
    "kronecker": Experiment(
        _kronecker,
        {"alpha": "sqrt2", "N": [2 ** k for k in range(7, 15)], "p": 2.0},
        {
            "description": "W_p of the n*alpha sequence against dx, plus star and L2 discrepancy",
            "primary": "N",
            "ranges": {"N": "a..b walks the powers of two in [a, b]"},
            "power_law": {"x": "N", "y": "Wp_exact", "slope": -1.0, "tolerance": 0.05},
            "gates": ["max/min of N*Wp/sqrt(log N) <= 3", "N*star_disc grows with log N"],
        },
    ),
    "uncertainty": Experiment(
        _uncertainty,
        {"family": "sin", "kind": "roots", "n": list(range(1, 65)), "eps": 0.01, "seed": DEFAULT_SEED},
        {
            "description": "roots (or critical points) times negative Sobolev norm against ||f||_1^2/||f||_inf",
            "primary": "n",
            "ranges": {"n": "a..b is every integer in [a, b]"},
            "families": ["sin", "perturbed", "random"],
            "gates": ["sin family: ratio constant within 1% (pi^2/4 for roots)"],
        },
    ),
    "eigen": Experiment(
        _eigen,
        {"n": list(range(1, 65)), "p": 1.0},
        {
            "description": "W_p between the positive and negative parts of sin(2 pi n x)",
            "primary": "n",
            "ranges": {"n": "a..b is every integer in [a, b]"},
            "power_law": {"x": "n", "y": "cost", "slope": -1.0, "tolerance": 0.05},
        },
    ),
    "heat": Experiment(
        _heat,
        {
            "mode": "two_step",
            "n": list(range(2, 65)),
            "p": 1.0,
            "t": [float(t) for t in np.geomspace(1e-4, 1e-1, 13)],
            "grid": 4096,
        },
        {
            "description": "two-step heat plan against exact transport (mode two_step) or heat-plan cost sweep in t (mode plan)",
            "primary": "n (two_step) or t (plan)",
            "ranges": {"n": "a..b is every integer in [a, b]", "t": "a..b gives 13 log-spaced times"},
            "gates": ["realized >= exact", "ratio / sqrt(log n) <= 10", "plan: max/min of cost^p / t^(p/2) <= 5"],
        },
    ),
    "littlewood": Experiment(
        _littlewood,
        {"K": [16, 32, 64, 128, 256], "family": "dirichlet", "seed": DEFAULT_SEED},
        {
            "description": "sum_k |c_k|/k against the L1 norm of the series",
            "primary": "K",
            "ranges": {"K": "a..b walks the powers of two in [a, b]"},
            "families": ["dirichlet", "random"],
            "gates": ["ratio stays bounded in K"],
        },
    ),
    "sandwich": Experiment(
        _sandwich,
        {"count": 500, "degree": 64, "grid": 4096, "quantization": 4096, "seed": DEFAULT_SEED, "C_lower": 10.0},
        {
            "description": "lower functional <= C*W1 <= C*2*extreme discrepancy on random nonnegative polynomials",
            "primary": "index",
            "gates": ["thm2_lower <= C_lower * W1_exact", "W1_exact <= 2 * extreme_disc_quantized", "W2 <= peyre_w2"],
        },
    ),
}


def describe(name: str) -> dict:
    if name not in EXPERIMENTS:
        raise ValidationError(f"unknown experiment {name!r}")
    exp = EXPERIMENTS[name]
    return {"experiment": name, **exp.manifest, "defaults": exp.defaults}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run one experiment; rows come back sorted by the primary parameter."""
    params = cfg.resolved()
    return EXPERIMENTS[cfg.name].run(params)
