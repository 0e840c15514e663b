"""Fourier-side functionals that bound transport and discrepancy.

All functionals return raw values; no absolute constants are applied.
Frequencies are those of the unit-circumference circle, so the negative
Sobolev norm is ``sum_{k != 0} |c_k|^2 / (4 pi^2 k^2)``.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import SignedMeasureError, TorusTransportError, ValidationError
from .measures import AtomicMeasure, Cdf, FourierSeries, TorusDensity, cdf, synthesize_grid
from .transport import _cdf_difference_pieces

__all__ = [
    "TruncationWarning",
    "BoundReport",
    "erdos_turan_functional",
    "optimal_erdos_turan",
    "leveque_functional",
    "h_minus_one_circle",
    "h_minus_one_interval",
    "h_minus_one_of_measure",
    "peyre_w2_bound",
    "thm1_functional",
    "thm2_lower_functional",
    "littlewood_lhs",
    "bound_report",
]

MEAN_TOL = 1e-10


class TruncationWarning(UserWarning):
    """A functional needed more coefficients than the series carries."""


def _require_mean_zero(s: FourierSeries, what: str) -> None:
    if abs(s.coeffs[s.K]) > MEAN_TOL:
        raise ValidationError(f"{what} needs a mean-zero series (c_0 = {s.coeffs[s.K]!r})")


def _positive_mags(s: FourierSeries) -> tuple[np.ndarray, np.ndarray]:
    return np.arange(1, s.K + 1, dtype=float), np.abs(s.positive)


def erdos_turan_functional(s: FourierSeries, n: int) -> float:
    """``1/n + sum_{k=1}^{n} |c_k| / k``.

    If ``n > K`` only the available coefficients are summed and a
    :class:`TruncationWarning` is emitted.
    """
    n = int(n)
    if n < 1:
        raise ValidationError("n must be at least 1")
    if n > s.K:
        warnings.warn(f"n={n} exceeds K={s.K}; sum truncated at K", TruncationWarning, stacklevel=2)
    k, mag = _positive_mags(s)
    m = min(n, s.K)
    return 1.0 / n + math.fsum(mag[:m] / k[:m])


def optimal_erdos_turan(s: FourierSeries) -> tuple[int, float]:
    """Minimize the Erdos-Turan functional over ``1 <= n <= K``."""
    if s.K < 1:
        return 1, 1.0
    k, mag = _positive_mags(s)
    vals = 1.0 / k + np.cumsum(mag / k)
    i = int(np.argmin(vals))
    return i + 1, float(vals[i])


def leveque_functional(s: FourierSeries) -> float:
    """``(sum_{k >= 1} |c_k|^2 / k^2)^{1/3}``."""
    k, mag = _positive_mags(s)
    return math.fsum(mag ** 2 / k ** 2) ** (1.0 / 3.0)


def h_minus_one_circle(s: FourierSeries) -> float:
    """Negative Sobolev norm of a mean-zero series on the unit circle."""
    _require_mean_zero(s, "h_minus_one_circle")
    k, mag = _positive_mags(s)
    return math.sqrt(2.0 * math.fsum(mag ** 2 / (4.0 * math.pi ** 2 * k ** 2)))


def h_minus_one_interval(d: TorusDensity) -> float:
    """``(int_0^1 H^2)^{1/2}`` with ``H(x) = int_0^x h`` for a mean-zero grid function.

    ``H`` is the trapezoid antiderivative, which is piecewise linear, and the
    square is integrated exactly.
    """
    scale = max(1.0, float(np.max(np.abs(d.samples))))
    if abs(d.mean) > MEAN_TOL * scale:
        raise ValidationError(f"h_minus_one_interval needs mean zero, got {d.mean!r}")
    H = np.concatenate([[0.0], np.cumsum(d.cell_masses())])
    h0, h1 = H[:-1], H[1:]
    return math.sqrt(max(math.fsum((h0 * h0 + h0 * h1 + h1 * h1) / 3.0) / d.M, 0.0))


def h_minus_one_of_measure(m: Cdf | AtomicMeasure | TorusDensity) -> float:
    """Circle norm of ``mu - |mu| dx`` computed from the distribution function.

    With ``H = F_mu - |mu| x`` the norm is ``(int H^2 - (int H)^2)^{1/2}``;
    both integrals are exact because ``H`` is piecewise linear.
    """
    F = cdf(m)
    h, d0, d1 = _cdf_difference_pieces(F, Cdf.uniform(F.total_mass))
    sq = math.fsum(h * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0)
    mean = math.fsum(h * (d0 + d1) / 2.0)
    return math.sqrt(max(sq - mean * mean, 0.0))


def peyre_w2_bound(d: TorusDensity | AtomicMeasure) -> float:
    """``2 ||mu - 1||_{H^-1}`` for a probability measure ``mu``.

    Evaluated exactly on the measure that the transport solvers see, i.e. the
    cell-constant density of a grid input.
    """
    if isinstance(d, TorusDensity) and d.signed:
        raise SignedMeasureError("peyre_w2_bound needs a nonnegative density")
    mass = cdf(d).total_mass
    if abs(mass - 1.0) > 1e-9:
        raise ValidationError(f"peyre_w2_bound needs a probability measure (mass {mass!r})")
    return 2.0 * h_minus_one_of_measure(d)


def thm1_functional(s: FourierSeries, p: float) -> float:
    """``(sum_{k=1}^{K} |c_k|^2 / k^{2p-2})^{1/(2p)}`` for a mean-zero series."""
    p = float(p)
    if p < 1:
        raise ValidationError("p must be >= 1")
    _require_mean_zero(s, "thm1_functional")
    k, mag = _positive_mags(s)
    return math.fsum(mag ** 2 / k ** (2 * p - 2)) ** (1.0 / (2 * p))


def thm2_lower_functional(s: FourierSeries, sup_norm: float) -> float:
    """``(1/sup_norm) sum_{k != 0} (1 + log|k|) |c_k|^2 / k^2`` (natural log)."""
    if not sup_norm > 0:
        raise ValidationError("sup_norm must be positive")
    k, mag = _positive_mags(s)
    return 2.0 * math.fsum((1.0 + np.log(k)) * mag ** 2 / k ** 2) / sup_norm


def littlewood_lhs(s: FourierSeries) -> float:
    """``sum_{k=1}^{K} |c_k| / k``."""
    k, mag = _positive_mags(s)
    return math.fsum(mag / k)


def series_sup_norm(s: FourierSeries, oversample: int = 16) -> float:
    """Grid estimate of ``max |f|`` for a real series."""
    M = max(64, oversample * (2 * s.K + 2))
    return float(np.max(np.abs(synthesize_grid(s, M).samples)))


@dataclass
class BoundReport:
    """Values of all functionals for one series.

    Failed entries hold NaN and the reason is stored in ``flags``.
    """

    entries: dict[str, float]
    metadata: dict = field(default_factory=dict)
    flags: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "entries": {k: (None if math.isnan(v) else v) for k, v in self.entries.items()},
            "metadata": dict(self.metadata),
            "flags": dict(self.flags),
        }

    def columns(self) -> list[str]:
        return list(self.entries)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(self.columns())
        w.writerow([repr(float(v)) for v in self.entries.values()])
        return buf.getvalue()


def bound_report(
    s: FourierSeries,
    n: int,
    p_list: Sequence[float] = (1.0, 2.0),
    sup_norm: float | None = None,
) -> BoundReport:
    """Evaluate every functional on ``s``.

    Functionals that concern the perturbation ``mu - mean`` (negative Sobolev,
    Peyre, thm1) are evaluated on the mean-removed series.
    """
    entries: dict[str, float] = {}
    flags: dict[str, str] = {}
    meta = {"K": s.K, "n": int(n), "p": [float(p) for p in p_list], "truncated": int(n) > s.K}
    centered = s.without_mean()

    def put(name, fn):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", TruncationWarning)
                entries[name] = float(fn())
        except (TorusTransportError, ValueError, ArithmeticError) as exc:
            entries[name] = float("nan")
            flags[name] = f"{type(exc).__name__}: {exc}"

    put("erdos_turan", lambda: erdos_turan_functional(s, n))
    put("leveque", lambda: leveque_functional(s))
    put("h_minus_one", lambda: h_minus_one_circle(centered))
    put("peyre_w2", lambda: 2.0 * h_minus_one_circle(centered))
    for p in p_list:
        put(f"thm1_p{float(p):g}", lambda p=p: thm1_functional(centered, p))
    put("thm2_lower", lambda: thm2_lower_functional(s, sup_norm if sup_norm is not None else series_sup_norm(s)))
    put("littlewood_lhs", lambda: littlewood_lhs(s))
    if meta["truncated"]:
        flags.setdefault("erdos_turan", f"truncated: n={n} > K={s.K}")
    return BoundReport(entries, meta, flags)
