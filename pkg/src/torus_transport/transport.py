"""Exact one-dimensional optimal transport on [0, 1] and on the circle.

Every cost here is computed in closed form from the quantile tables of
:class:`~torus_transport.measures.Cdf`: both atoms and piecewise-constant
densities have piecewise-linear quantile functions, so ``int |Q_mu - Q_nu|^p``
is a finite sum of integrals of ``|linear|^p``.

On the circle the quantile of the second measure is lifted periodically and
shifted in the mass variable; the shift is optimized by a coarse grid plus
golden-section search (``p > 1``) or by an exact median formula (``p = 1``).
A linear-programming oracle over explicit couplings is provided for
cross-validation on small atomic inputs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog
from scipy.sparse import coo_matrix

from .errors import MassMismatchError, NonConvergenceError, SizeCapError, ValidationError
from .measures import AtomicMeasure, Cdf, TorusDensity, cdf, circle_distance

__all__ = [
    "TransportCost",
    "DiscretePlan",
    "w1_interval",
    "w1_circle",
    "wp_interval",
    "wp_circle",
    "discrete_ot_oracle",
    "mass_scaled_wp",
]

MASS_TOL = 1e-9
ORACLE_CAP = 256
SHIFT_TOL = 1e-12
MAX_SHIFT_ITER = 10_000
GRID_CELLS = 64
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

MeasureLike = Union[Cdf, AtomicMeasure, TorusDensity]


@dataclass(frozen=True)
class TransportCost:
    """Result of a transport computation.

    ``cost`` is ``W_p`` itself (the p-th root already taken). ``shift`` is the
    optimal rotation of the coupling, expressed as a shift of the mass
    variable in ``[0, total mass)``; it is ``None`` on the interval.
    """

    p: float
    cost: float
    shift: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "cost", float(self.cost))
        if self.shift is not None:
            object.__setattr__(self, "shift", float(self.shift))

    def __float__(self) -> float:
        return float(self.cost)

    def to_dict(self) -> dict:
        return {"p": self.p, "cost": self.cost, "shift": self.shift}


@dataclass(frozen=True)
class DiscretePlan:
    """Sparse coupling between two atomic measures."""

    sources: np.ndarray
    targets: np.ndarray
    masses: np.ndarray

    def __len__(self) -> int:
        return self.masses.size

    def dense(self, n: int, m: int) -> np.ndarray:
        out = np.zeros((n, m))
        np.add.at(out, (self.sources, self.targets), self.masses)
        return out

    def marginals(self, n: int, m: int):
        return (
            np.bincount(self.sources, weights=self.masses, minlength=n),
            np.bincount(self.targets, weights=self.masses, minlength=m),
        )

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["source", "target", "mass"])
            for i, j, w in zip(self.sources, self.targets, self.masses):
                writer.writerow([int(i), int(j), repr(float(w))])

    def to_dict(self) -> dict:
        return {
            "entries": [[int(i), int(j), float(w)] for i, j, w in zip(self.sources, self.targets, self.masses)]
        }


# ---------------------------------------------------------------------------
# closed-form building blocks
# ---------------------------------------------------------------------------


def _abs_power_mean(d0, d1, p: float) -> np.ndarray:
    """``int_0^1 |d0 + (d1 - d0) s|^p ds`` elementwise, without cancellation."""
    d0 = np.asarray(d0, dtype=float)
    d1 = np.asarray(d1, dtype=float)
    a0, a1 = np.abs(d0), np.abs(d1)
    q = p + 1.0
    out = np.empty(np.broadcast(d0, d1).shape)
    cross = (d0 * d1) < 0
    if np.any(cross):
        s0, s1 = a0[cross], a1[cross]
        out[cross] = (s0 ** q + s1 ** q) / (q * (s0 + s1))
    same = ~cross
    if np.any(same):
        big = np.maximum(a0[same], a1[same])
        small = np.minimum(a0[same], a1[same])
        res = np.zeros(big.shape)
        nz = big > 0
        b, s = big[nz], small[nz]
        delta = (b - s) / b
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(delta > 0, -np.expm1(q * np.log1p(-delta)) / delta, q)
        res[nz] = b ** p * ratio / q
        out[same] = res
    return out


def _check_p(p: float) -> float:
    p = float(p)
    if not np.isfinite(p) or p < 1:
        raise ValidationError(f"exponent p must be finite and >= 1, got {p!r}")
    return p


def _as_cdf(m: MeasureLike) -> Cdf:
    return cdf(m)


def _common_mass(mu: Cdf, nu: Cdf) -> tuple[Cdf, Cdf, float]:
    m1, m2 = mu.total_mass, nu.total_mass
    if abs(m1 - m2) > MASS_TOL:
        raise MassMismatchError(f"total masses differ: {m1!r} vs {m2!r}")
    if m1 <= 0:
        raise ValidationError("measures must carry positive mass")
    if m1 != m2:
        nu = nu.scaled(m1 / m2)
    return mu, nu, m1


def _quantile_table(F: Cdf, mass: float):
    levels, lo, hi = F.segments()
    levels = levels.copy()
    levels[-1] = mass
    return levels, lo, hi


def _eval_segments(levels, lo, hi, idx, t):
    L0, L1 = levels[idx], levels[idx + 1]
    frac = (t - L0) / (L1 - L0)
    return lo[idx] + (hi[idx] - lo[idx]) * frac


def _merged_cost(tab_a, tab_b, mass: float, p: float, shift: float = 0.0) -> float:
    """``int_0^mass |Q_a(t) - Q_b(t + shift)|^p dt`` for quantile tables.

    ``tab_b`` must cover ``[shift, mass + shift]``.
    """
    la, loa, hia = tab_a
    lb, lob, hib = tab_b
    lb_shift = lb - shift
    inner = lb_shift[(lb_shift > 0) & (lb_shift < mass)]
    T = np.union1d(la, inner)
    T = T[(T >= 0) & (T <= mass)]
    left, right = T[:-1], T[1:]
    mids = 0.5 * (left + right)
    ia = np.clip(np.searchsorted(la, mids, side="right") - 1, 0, la.size - 2)
    ib = np.clip(np.searchsorted(lb_shift, mids, side="right") - 1, 0, lb.size - 2)
    a0 = _eval_segments(la, loa, hia, ia, left)
    a1 = _eval_segments(la, loa, hia, ia, right)
    b0 = _eval_segments(lb_shift, lob, hib, ib, left)
    b1 = _eval_segments(lb_shift, lob, hib, ib, right)
    vals = (right - left) * _abs_power_mean(a0 - b0, a1 - b1, p)
    return math.fsum(vals)


def _lifted_table(tab, mass: float, copies: range = range(-2, 3)):
    levels, lo, hi = tab
    ls, los, his = [], [], []
    for k in copies:
        ls.append(levels[:-1] + k * mass)
        los.append(lo + k)
        his.append(hi + k)
    ls.append(np.array([levels[-1] + copies[-1] * mass]))
    return np.concatenate(ls), np.concatenate(los), np.concatenate(his)


# ---------------------------------------------------------------------------
# interval
# ---------------------------------------------------------------------------


def _cdf_difference_pieces(mu: Cdf, nu: Cdf):
    """``F_mu - F_nu`` as linear pieces ``(length, value_left, value_right)``."""
    xs = np.union1d(np.union1d(mu.breakpoints, nu.breakpoints), [0.0, 1.0])
    left, right = xs[:-1], xs[1:]
    d0 = mu(left) - nu(left)
    d1 = mu.left(right) - nu.left(right)
    return right - left, d0, d1


def w1_interval(mu: MeasureLike, nu: MeasureLike) -> float:
    """``W_1`` on ``[0, 1]`` as ``int |F_mu - F_nu| dx``, exact for step/linear Cdfs."""
    mu, nu, _ = _common_mass(_as_cdf(mu), _as_cdf(nu))
    h, d0, d1 = _cdf_difference_pieces(mu, nu)
    return math.fsum(h * _abs_power_mean(d0, d1, 1.0))


def wp_interval(mu: MeasureLike, nu: MeasureLike, p: float = 2.0) -> float:
    """``W_p`` on ``[0, 1]`` from the monotone (quantile) coupling."""
    p = _check_p(p)
    mu, nu, mass = _common_mass(_as_cdf(mu), _as_cdf(nu))
    total = _merged_cost(_quantile_table(mu, mass), _quantile_table(nu, mass), mass, p)
    return max(total, 0.0) ** (1.0 / p)


# ---------------------------------------------------------------------------
# circle
# ---------------------------------------------------------------------------


def _lebesgue_median(h, d0, d1) -> float:
    """A value ``c`` with ``|{D < c}| <= L/2 <= |{D <= c}|`` for piecewise-linear D."""
    lo = np.minimum(d0, d1)
    hi = np.maximum(d0, d1)
    half = 0.5 * math.fsum(h)
    flat = hi - lo <= 0
    pos = np.concatenate([lo[flat], lo[~flat], hi[~flat]])
    slope_h = h[~flat] / (hi[~flat] - lo[~flat])
    jumps = np.concatenate([h[flat], np.zeros(2 * slope_h.size)])
    dslope = np.concatenate([np.zeros(int(flat.sum())), slope_h, -slope_h])
    ev, inv = np.unique(pos, return_inverse=True)
    jump = np.bincount(inv, weights=jumps, minlength=ev.size)
    ds = np.bincount(inv, weights=dslope, minlength=ev.size)
    G = 0.0
    slope = 0.0
    prev = ev[0]
    for x, j, s in zip(ev, jump, ds):
        before = G + slope * (x - prev)
        if before >= half and slope > 0:
            return float(prev + (half - G) / slope)
        G = before + j
        if G >= half:
            return float(x)
        slope = max(slope + s, 0.0)
        prev = x
    return float(ev[-1])


def w1_circle(mu: MeasureLike, nu: MeasureLike) -> TransportCost:
    """Circle ``W_1`` as ``min_c int |F_mu - F_nu - c|``, minimized at a median."""
    mu, nu, mass = _common_mass(_as_cdf(mu), _as_cdf(nu))
    h, d0, d1 = _cdf_difference_pieces(mu, nu)
    c = _lebesgue_median(h, d0, d1)
    value = math.fsum(h * _abs_power_mean(d0 - c, d1 - c, 1.0))
    return TransportCost(1.0, value, float((-c) % mass))


def _step_only(F: Cdf) -> bool:
    return F.kind == "step"


def wp_circle(mu: MeasureLike, nu: MeasureLike, p: float = 2.0) -> TransportCost:
    """Circle ``W_p`` by optimizing the rotation of the quantile coupling.

    The mass shift ``theta`` is searched on ``[A - m/2, A + m/2]`` where ``A``
    is the difference of quantile integrals: by Jensen's inequality the cost
    exceeds ``m (1/2)^p`` outside this window, and the diameter bound caps the
    optimum at that value.
    """
    p = _check_p(p)
    mu, nu, mass = _common_mass(_as_cdf(mu), _as_cdf(nu))
    if p == 1.0:
        return w1_circle(mu, nu)
    tab_a = _quantile_table(mu, mass)
    tab_b = _quantile_table(nu, mass)
    lifted = _lifted_table(tab_b, mass)

    def q_integral(tab):
        lv, lo, hi = tab
        return math.fsum(np.diff(lv) * 0.5 * (lo + hi))

    A = q_integral(tab_a) - q_integral(tab_b)

    def cost(theta: float) -> float:
        return _merged_cost(tab_a, lifted, mass, p, theta)

    lo_b, hi_b = A - 0.5 * mass, A + 0.5 * mass
    grid = np.linspace(lo_b, hi_b, GRID_CELLS + 1)
    values = np.array([cost(t) for t in grid])
    k = int(np.argmin(values))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, GRID_CELLS)]
    best_t, best_v = grid[k], values[k]

    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = cost(x1), cost(x2)
    it = 0
    while b - a > SHIFT_TOL:
        it += 1
        if it > MAX_SHIFT_ITER:
            raise NonConvergenceError(
                "shift search did not converge",
                {"iterations": it, "bracket": (a, b), "best_shift": best_t, "best_cost": best_v},
            )
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = cost(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = cost(x2)
    for t, v in ((x1, f1), (x2, f2)):
        if v < best_v:
            best_t, best_v = t, v

    if _step_only(mu) and _step_only(nu):
        # piecewise linear in theta: the minimum sits where two mass levels align
        cand = (lifted[0][:, None] - tab_a[0][None, :]).ravel()
        near = cand[np.abs(cand - best_t) < 1e-9]
        for t in near:
            v = cost(float(t))
            if v < best_v:
                best_t, best_v = float(t), v

    return TransportCost(p, max(best_v, 0.0) ** (1.0 / p), float(best_t % mass))


def mass_scaled_wp(fplus: MeasureLike, fminus: MeasureLike, p: float = 1.0) -> float:
    """``W_p`` between two nonnegative measures of equal (not necessarily unit) mass.

    Both are normalized to probability measures, transported on the circle,
    and the result rescaled as ``(m * W_p^p)^{1/p}``.
    """
    p = _check_p(p)
    F, G = _as_cdf(fplus), _as_cdf(fminus)
    mass = F.total_mass
    if abs(mass - G.total_mass) > MASS_TOL:
        raise MassMismatchError(f"positive and negative masses differ: {mass!r} vs {G.total_mass!r}")
    if mass <= 0:
        raise ValidationError("measures must carry positive mass")
    w = wp_circle(F.normalized(), G.normalized(), p).cost
    return (mass * w ** p) ** (1.0 / p)


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


def discrete_ot_oracle(
    a: AtomicMeasure, b: AtomicMeasure, p: float = 1.0, metric: str = "circle"
) -> tuple[float, DiscretePlan]:
    """Solve the discrete transport problem exactly.

    Returns ``(W_p^p, plan)``. Equal-size, equal-weight inputs are solved as
    an assignment problem; everything else as a linear program with the
    HiGHS dual simplex.
    """
    p = _check_p(p)
    n, m = len(a), len(b)
    if n > ORACLE_CAP or m > ORACLE_CAP:
        raise SizeCapError(f"oracle is capped at {ORACLE_CAP} atoms per side (got {n} and {m})")
    if abs(a.total_mass - b.total_mass) > MASS_TOL:
        raise MassMismatchError(f"total masses differ: {a.total_mass!r} vs {b.total_mass!r}")
    if metric == "circle":
        dist = circle_distance(a.locations[:, None], b.locations[None, :])
    elif metric == "interval":
        dist = np.abs(a.locations[:, None] - b.locations[None, :])
    else:
        raise ValidationError(f"unknown metric {metric!r}")
    C = dist ** p
    wa, wb = a.weights, b.weights * (a.total_mass / b.total_mass)

    if n == m and np.allclose(wa, wa[0], rtol=0, atol=1e-15) and np.allclose(wb, wa[0], rtol=0, atol=1e-15):
        rows, cols = linear_sum_assignment(C)
        masses = wa[rows]
    else:
        ii, jj = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
        ii, jj = ii.ravel(), jj.ravel()
        var = np.arange(n * m)
        A_eq = coo_matrix(
            (np.ones(2 * n * m), (np.concatenate([ii, n + jj]), np.concatenate([var, var]))),
            shape=(n + m, n * m),
        ).tocsr()
        b_eq = np.concatenate([wa, wb])
        res = linprog(
            C.ravel(),
            A_eq=A_eq,
            b_eq=b_eq,
            bounds=(0, None),
            method="highs-ds",
            options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
        )
        if res.status != 0:
            raise NonConvergenceError(f"transport LP failed: {res.message}", {"status": res.status})
        x = np.maximum(res.x, 0.0)
        keep = x > 1e-15
        rows, cols, masses = ii[keep], jj[keep], x[keep]

    plan = DiscretePlan(rows.astype(np.int64), cols.astype(np.int64), masses)
    ra, cb = plan.marginals(n, m)
    if np.max(np.abs(ra - wa)) > 1e-9 or np.max(np.abs(cb - wb)) > 1e-9:
        raise NonConvergenceError("oracle plan violates its marginals", {"row_err": float(np.max(np.abs(ra - wa)))})
    total = math.fsum(masses * C[rows, cols])
    return total, plan
