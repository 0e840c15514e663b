"""Heat flow on the unit circle, heat-kernel transport plans and oscillation functionals.

The Laplacian eigenvalue of ``e^{2 pi i k x}`` is ``4 pi^2 k^2``; the heat
kernel at time ``t`` is therefore a Gaussian of variance ``2t`` wrapped
around the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, optimize

from .errors import BoundViolationError, ValidationError
from .measures import FourierSeries, TorusDensity, cdf, evaluate_series, synthesize_grid
from .transport import mass_scaled_wp, wp_circle

__all__ = [
    "HeatParams",
    "SplitPair",
    "Sides",
    "SmoothingDecomposition",
    "heat_evolve",
    "heat_evolve_density",
    "heat_kernel_moment",
    "heat_plan_cost",
    "smoothing_decomposition",
    "sign_split",
    "eigen_split_cost",
    "find_sign_changes",
    "count_sign_changes",
    "series_l1_norm",
    "series_sup_norm",
    "uncertainty_sides",
    "critical_point_sides",
    "two_step_time",
    "high_freq_two_step_cost",
]

FOUR_PI2 = 4.0 * math.pi ** 2
UNDERFLOW = 1e-300
ROOT_WIDTH = 1e-12
OVERSAMPLE = 64
MEAN_TOL = 1e-10


@dataclass(frozen=True)
class HeatParams:
    """Time ``t``, frequency cut ``lambda_cut`` and transport exponent ``p``."""

    t: float
    lambda_cut: float = 0.0
    p: float = 1.0

    def __post_init__(self):
        if not self.t > 0:
            raise ValidationError("t must be positive")
        if self.lambda_cut < 0:
            raise ValidationError("lambda_cut must be nonnegative")
        if self.p < 1:
            raise ValidationError("p must be >= 1")


@dataclass(frozen=True)
class SplitPair:
    """Positive and negative parts of a mean-zero grid function."""

    fplus: TorusDensity
    fminus: TorusDensity

    @property
    def masses(self) -> tuple[float, float]:
        return self.fplus.mean, self.fminus.mean


class Sides(NamedTuple):
    lhs: float
    rhs: float
    ratio: float


@dataclass(frozen=True)
class SmoothingDecomposition:
    """Low-frequency part of ``e^{t Delta} f`` and what is left over.

    Iterating yields ``(truncated, tail_l1, kernel_cost)``.
    """

    truncated: FourierSeries
    tail_l1: float
    kernel_cost: float
    tail: FourierSeries
    t: float
    cutoff: int

    def __iter__(self):
        return iter((self.truncated, self.tail_l1, self.kernel_cost))


# ---------------------------------------------------------------------------
# evolution and kernel
# ---------------------------------------------------------------------------


def heat_evolve(s: FourierSeries, t: float) -> FourierSeries:
    """Multiply ``c_k`` by ``exp(-4 pi^2 k^2 t)``; ``c_0`` is untouched."""
    if t < 0:
        raise ValidationError("t must be nonnegative")
    k = s.frequencies.astype(float)
    return FourierSeries(s.coeffs * np.exp(-FOUR_PI2 * k * k * t), real=s.real)


def heat_evolve_density(d: TorusDensity, t: float) -> TorusDensity:
    """Heat flow applied to grid samples through the real FFT.

    The density is treated as periodic (an ``endpoint`` value is ignored).
    """
    if t < 0:
        raise ValidationError("t must be nonnegative")
    M = d.M
    k = np.arange(M // 2 + 1, dtype=float)
    spectrum = np.fft.rfft(d.samples) * np.exp(-FOUR_PI2 * k * k * t)
    out = np.fft.irfft(spectrum, n=M)
    if not d.signed:
        out = np.maximum(out, 0.0)
    return TorusDensity(out, signed=d.signed)


def _kernel_terms(t: float) -> int:
    return int(math.floor(math.sqrt(-math.log(UNDERFLOW) / (FOUR_PI2 * t)))) + 1


def heat_kernel(x, t: float) -> np.ndarray:
    """Wrapped heat kernel ``1 + 2 sum_k e^{-4 pi^2 k^2 t} cos(2 pi k x)``."""
    if not t > 0:
        raise ValidationError("t must be positive")
    x = np.asarray(x, dtype=float)
    k = np.arange(1, _kernel_terms(t) + 1, dtype=float)
    w = np.exp(-FOUR_PI2 * k * k * t)
    return 1.0 + 2.0 * (np.cos(2.0 * np.pi * np.multiply.outer(x, k)) @ w)


def heat_kernel_moment(t: float, p: float, method: str = "fourier") -> float:
    """``E[d(0, Z)^p]`` for the heat kernel at time ``t``.

    Parameters
    ----------
    t : float
        Positive time.
    p : float
        Moment exponent, ``p >= 1``.
    method : {"fourier", "images"}
        ``"fourier"`` integrates the Fourier-synthesized kernel;
        ``"images"`` sums Gaussian images and serves as an independent check.
    """
    if not t > 0:
        raise ValidationError("t must be positive")
    if p < 1:
        raise ValidationError("p must be >= 1")
    sigma = math.sqrt(2.0 * t)
    # past 14 sigma the Gaussian factor is below 1e-40, so only round-off is left there
    upper = min(0.5, 14.0 * sigma)
    brk = [b for b in (sigma, 4 * sigma, 10 * sigma) if b < upper]
    opts = dict(limit=1000, epsabs=0.0, epsrel=1e-12, points=brk or None)
    if method == "fourier":
        val, _ = integrate.quad(lambda x: x ** p * heat_kernel(x, t), 0.0, upper, **opts)
        return 2.0 * val
    if method == "images":
        c = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
        J = int(math.ceil(40.0 * sigma)) + 1

        def kern(x):
            j = np.arange(-J, J + 1)
            return c * np.sum(np.exp(-((x - j) ** 2) / (2.0 * sigma ** 2)))

        val, _ = integrate.quad(lambda x: x ** p * kern(x), 0.0, upper, **opts)
        return 2.0 * val
    raise ValidationError(f"unknown method {method!r}")


def heat_plan_cost(d: TorusDensity, t: float, p: float, verify: bool = True) -> float:
    """Cost of moving ``|f| dx`` along the heat kernel for time ``t``.

    Every unit of mass at ``y`` is spread as the kernel centered at ``y``, so
    the cost is ``(||f||_1 E[d(0, Z)^p])^{1/p}``. This coupling has
    ``e^{t Delta} f`` as its second marginal; with ``verify`` the exact
    ``W_p`` between the two is computed and must not exceed the cost.
    """
    if not t > 0:
        raise ValidationError("t must be positive")
    if p < 1:
        raise ValidationError("p must be >= 1")
    periodic = TorusDensity(d.samples, signed=d.signed)
    mass = periodic.l1_norm()
    cost = (mass * heat_kernel_moment(t, p)) ** (1.0 / p)
    if verify and not d.signed and mass > 0:
        evolved = heat_evolve_density(periodic, t)
        exact = wp_circle(cdf(periodic), cdf(evolved).scaled(mass / cdf(evolved).total_mass), p).cost
        if exact > cost * (1 + 1e-9) + 1e-12:
            raise BoundViolationError(f"heat plan cost {cost!r} is below the exact distance {exact!r}")
    return cost


def _series_mass(s: FourierSeries, M: int | None = None) -> float:
    M = M or max(4096, OVERSAMPLE * (2 * s.K + 2))
    return TorusDensity(np.abs(synthesize_grid(s, M).samples)).mean


def smoothing_decomposition(s: FourierSeries, n: int, p: float = 1.0) -> SmoothingDecomposition:
    """Evolve for ``t = 1/n^2`` and cut the spectrum at ``X = n log n``.

    ``tail_l1`` bounds the L1 norm of the discarded part by the sum of its
    coefficient magnitudes. ``kernel_cost`` is the heat-plan cost of the
    evolution step.
    """
    if n < 2:
        raise ValidationError("n must be >= 2")
    t = 1.0 / n ** 2
    cutoff = int(math.floor(n * math.log(n)))
    evolved = heat_evolve(s, t)
    truncated = evolved.truncated(min(cutoff, s.K))
    tail = evolved - truncated.padded(evolved.K)
    tail_l1 = 2.0 * math.fsum(np.abs(tail.positive))
    kernel_cost = (_series_mass(s) * heat_kernel_moment(t, p)) ** (1.0 / p)
    return SmoothingDecomposition(truncated, tail_l1, kernel_cost, tail, t, cutoff)


# ---------------------------------------------------------------------------
# sign split
# ---------------------------------------------------------------------------


def _require_mean_zero(s: FourierSeries, what: str) -> None:
    scale = max(1.0, float(np.max(np.abs(s.coeffs))))
    if abs(s.coeffs[s.K]) > MEAN_TOL * scale:
        raise ValidationError(f"{what} needs a mean-zero series (c_0 = {s.coeffs[s.K]!r})")


def sign_split(s: FourierSeries, M: int = 4096) -> SplitPair:
    """Grid positive and negative parts of a mean-zero series."""
    _require_mean_zero(s, "sign_split")
    f = synthesize_grid(s.without_mean(), M).samples
    return SplitPair(TorusDensity(np.maximum(f, 0.0)), TorusDensity(np.maximum(-f, 0.0)))


def _split_grid(K: int, base: int = 4096, per_period: int = 128) -> int:
    target = max(base, per_period * K)
    step = 2 * K
    return step * -(-target // step)


def eigen_split_cost(n: int, p: float = 1.0, M: int | None = None) -> float:
    """``W_p`` between the positive and negative parts of ``sin(2 pi n x)``.

    The default grid is a multiple of ``2n`` so every zero lies on a node.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    pair = sign_split(FourierSeries.sine(n), M or _split_grid(n))
    return mass_scaled_wp(pair.fplus, pair.fminus, p)


# ---------------------------------------------------------------------------
# roots and norms
# ---------------------------------------------------------------------------


def find_sign_changes(s: FourierSeries) -> np.ndarray:
    """Sorted locations in ``[0, 1)`` where the series changes sign.

    Candidates come from ``64 K`` samples; each is refined by bisection on
    the exact trigonometric sum to width ``1e-12``. Zeros without a sign
    change are not reported.
    """
    if s.K < 1:
        raise ValidationError("need K >= 1")
    if not np.any(s.coeffs[s.K + 1:] != 0) and s.coeffs[s.K] == 0:
        raise ValidationError("the function is identically zero")
    M = OVERSAMPLE * s.K
    f = synthesize_grid(s, M).samples
    scale = float(np.max(np.abs(f)))
    if scale == 0:
        raise ValidationError("the function is identically zero")
    idx = np.flatnonzero(np.abs(f) > 1e-13 * scale)
    if idx.size == 0:
        raise ValidationError("the function is identically zero")
    sg = np.sign(f[idx])
    nxt = np.roll(np.arange(idx.size), -1)
    change = sg != sg[nxt]
    if not np.any(change):
        return np.empty(0)
    a = idx[change] / M
    b = idx[nxt][change] / M
    b = np.where(b <= a, b + 1.0, b)
    sa = sg[change]
    while np.max(b - a) > ROOT_WIDTH:
        mid = 0.5 * (a + b)
        fm = evaluate_series(s, mid % 1.0)
        left = np.sign(fm) == sa
        a = np.where(left, mid, a)
        b = np.where(left, b, mid)
    return np.sort((0.5 * (a + b)) % 1.0)


def count_sign_changes(s: FourierSeries, require_mean_zero: bool = True) -> int:
    """Number of sign changes of a real trigonometric polynomial on the circle."""
    if require_mean_zero:
        _require_mean_zero(s, "count_sign_changes")
    return int(find_sign_changes(s).size)


def series_l1_norm(s: FourierSeries, roots: np.ndarray | None = None) -> float:
    """``int |f|`` for a mean-zero series, exact from its sign changes."""
    _require_mean_zero(s, "series_l1_norm")
    if roots is None:
        roots = find_sign_changes(s)
    if roots.size == 0:
        return 0.0
    F = evaluate_series(s.antiderivative(), roots)
    return math.fsum(np.abs(np.roll(F, -1) - F))


def series_sup_norm(s: FourierSeries) -> float:
    """``max |f|``: grid maximum polished by bounded scalar search."""
    M = OVERSAMPLE * max(s.K, 1)
    f = np.abs(synthesize_grid(s, M).samples)
    best = float(np.max(f))
    cand = np.argsort(f)[-8:]
    for j in cand:
        x0 = j / M
        res = optimize.minimize_scalar(
            lambda x: -abs(float(evaluate_series(s, np.array([x]))[0])),
            bounds=(x0 - 1.0 / M, x0 + 1.0 / M),
            method="bounded",
            options={"xatol": 1e-13},
        )
        best = max(best, -float(res.fun))
    return best


def uncertainty_sides(s: FourierSeries) -> Sides:
    """Both sides of the roots/negative-Sobolev uncertainty inequality.

    ``lhs = (#sign changes) * (sum_{k>=1} |c_k|^2 / k^2)^{1/2}`` and
    ``rhs = ||f||_1^2 / ||f||_inf``.
    """
    _require_mean_zero(s, "uncertainty_sides")
    roots = find_sign_changes(s)
    k = np.arange(1, s.K + 1, dtype=float)
    weighted = math.sqrt(math.fsum(np.abs(s.positive) ** 2 / k ** 2))
    lhs = roots.size * weighted
    rhs = series_l1_norm(s, roots) ** 2 / series_sup_norm(s)
    return Sides(lhs, rhs, lhs / rhs)


def critical_point_sides(s: FourierSeries) -> Sides:
    """Critical-point version: ``(#sign changes of f') * ||f - mean||_2`` against
    ``||f'||_1^2 / ||f'||_inf``."""
    d = s.derivative()
    if not np.any(np.abs(d.positive) > 0):
        raise ValidationError("the derivative is identically zero")
    roots = find_sign_changes(d)
    lhs = roots.size * s.l2_norm(exclude_mean=True)
    rhs = series_l1_norm(d, roots) ** 2 / series_sup_norm(d)
    return Sides(lhs, rhs, lhs / rhs)


# ---------------------------------------------------------------------------
# two-step plan for high-frequency functions
# ---------------------------------------------------------------------------


def _band_start(s: FourierSeries, k0: int | None) -> int:
    mags = np.abs(s.positive)
    scale = max(float(np.max(mags, initial=0.0)), 1e-300)
    nz = np.flatnonzero(mags > 1e-12 * scale)
    if nz.size == 0:
        raise ValidationError("the function is identically zero")
    first = int(nz[0]) + 1
    if k0 is None:
        return first
    if k0 < 1:
        raise ValidationError("k0 must be >= 1")
    if first < k0:
        raise ValidationError(f"spectrum has energy at |k| = {first} below the band start {k0}")
    return int(k0)


def two_step_time(s: FourierSeries, p: float, k0: int | None = None) -> float:
    """Heat time of the two-step plan with ``lambda = 4 pi^2 k0^2``.

    A single frequency uses ``log(lambda) / lambda``; otherwise
    ``log(lambda^{p/2} ||f||_2 / ||f||_1) / lambda``.
    """
    _require_mean_zero(s, "two_step_time")
    k0 = _band_start(s, k0)
    lam = FOUR_PI2 * k0 * k0
    mags = np.abs(s.positive)
    single = np.count_nonzero(mags > 1e-12 * np.max(mags)) == 1 and mags[k0 - 1] > 0
    if single:
        return math.log(lam) / lam
    l1 = series_l1_norm(s)
    l2 = s.l2_norm(exclude_mean=True)
    return math.log(lam ** (p / 2.0) * l2 / l1) / lam


def high_freq_two_step_cost(
    s: FourierSeries, p: float = 1.0, k0: int | None = None, M: int | None = None
) -> tuple[float, float]:
    """Realized two-step plan cost and the exact ``W_p(f_+, f_-)``.

    Step one runs the heat flow on both parts for the time chosen by
    :func:`two_step_time`; step two moves what remains of ``(e^{t Delta} f)_+``
    across at most the diameter ``1/2``. Returns ``(realized, exact)``.
    """
    if p < 1:
        raise ValidationError("p must be >= 1")
    _require_mean_zero(s, "high_freq_two_step_cost")
    k0 = _band_start(s, k0)
    t = two_step_time(s, p, k0)
    half_mass = 0.5 * series_l1_norm(s)
    step1 = (half_mass * heat_kernel_moment(t, p)) ** (1.0 / p)
    g = heat_evolve(s, t)
    g_plus = 0.5 * series_l1_norm(g) if np.any(np.abs(g.positive) > 0) else 0.0
    step2 = (0.5 ** p * g_plus) ** (1.0 / p)
    realized = 2.0 * step1 + step2
    pair = sign_split(s, M or _split_grid(s.K))
    exact = mass_scaled_wp(pair.fplus, pair.fminus, p)
    if realized < exact * (1 - 1e-9):
        raise BoundViolationError(f"two-step cost {realized!r} is below the exact distance {exact!r}")
    return realized, exact
