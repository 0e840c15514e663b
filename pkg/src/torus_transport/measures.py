"""Measures on the circumference-1 circle and conversions between their forms.

Three representations are used throughout the package:

* :class:`TorusDensity` -- samples of a density on the uniform grid ``x_j = j/M``;
* :class:`AtomicMeasure` -- finitely many weighted point masses on ``[0, 1)``;
* :class:`FourierSeries` -- coefficients ``c_k``, ``k = -K..K``, with the
  convention ``c_k = \\int_0^1 f(x) e^{-2 pi i k x} dx``.

:class:`Cdf` is the cumulative distribution used by the exact transport
solvers. All objects are immutable after construction.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np

from .errors import AliasingError, SignedMeasureError, ValidationError

__all__ = [
    "TorusDensity",
    "AtomicMeasure",
    "FourierSeries",
    "Cdf",
    "circle_distance",
    "fourier_of_density",
    "fourier_of_atoms",
    "synthesize_grid",
    "cdf",
    "quantile_atoms",
    "evaluate_series",
]

DEFAULT_GRID = 4096
MASS_TOL = 1e-12


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def circle_distance(x, y):
    """Geodesic distance on the circle of circumference 1.

    Works elementwise on arrays; the result lies in ``[0, 1/2]``.
    """
    d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) % 1.0
    return np.minimum(d, 1.0 - d)


# ---------------------------------------------------------------------------
# grid densities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusDensity:
    """Density sampled at ``x_j = j/M`` on the unit circle.

    Parameters
    ----------
    samples : array_like, shape (M,)
        Values ``f(j/M)``.
    endpoint : float, optional
        Left limit ``f(1^-)``. ``None`` means the density is continuous across
        ``0 == 1`` so the periodic value ``samples[0]`` is used. Supplying it
        lets densities with a jump at the origin (``f(x) = 2x``) be integrated
        with the trapezoid rule without an O(1/M) error in the last cell.
    signed : bool
        Allow negative samples (perturbations). Operations that need a
        nonnegative measure reject signed densities.
    """

    samples: np.ndarray
    endpoint: float | None = None
    signed: bool = False

    def __post_init__(self):
        s = _frozen(self.samples)
        if s.ndim != 1:
            raise ValidationError("samples must be one-dimensional")
        if s.size < 4:
            raise ValidationError(f"grid size M={s.size} is below the minimum of 4")
        if not np.all(np.isfinite(s)):
            raise ValidationError("samples must be finite")
        end = None if self.endpoint is None else float(self.endpoint)
        if not self.signed:
            if np.any(s < 0) or (end is not None and end < 0):
                raise SignedMeasureError(
                    "negative samples in a density; construct with signed=True "
                    "for perturbations"
                )
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "endpoint", end)

    @classmethod
    def from_function(
        cls,
        f: Callable[[np.ndarray], np.ndarray],
        M: int = DEFAULT_GRID,
        periodic: bool = True,
        signed: bool = False,
    ) -> "TorusDensity":
        x = np.arange(M) / M
        samples = np.broadcast_to(np.asarray(f(x), dtype=float), (M,))
        end = None if periodic else float(np.asarray(f(np.array([1.0])), dtype=float)[0])
        return cls(samples, endpoint=end, signed=signed)

    @classmethod
    def uniform(cls, M: int = DEFAULT_GRID, level: float = 1.0) -> "TorusDensity":
        return cls(np.full(M, float(level)))

    @property
    def M(self) -> int:
        return self.samples.size

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.M) / self.M

    @property
    def endpoint_value(self) -> float:
        return float(self.samples[0]) if self.endpoint is None else self.endpoint

    @property
    def mean(self) -> float:
        """Trapezoid integral over one period (equals the sample mean when periodic)."""
        corr = 0.0 if self.endpoint is None else 0.5 * (self.endpoint - self.samples[0])
        return float((math.fsum(self.samples) + corr) / self.M)

    def cell_masses(self) -> np.ndarray:
        """Trapezoid mass of each cell ``[x_j, x_{j+1}]``."""
        right = np.append(self.samples[1:], self.endpoint_value)
        return 0.5 * (self.samples + right) / self.M

    def l1_norm(self) -> float:
        return TorusDensity(
            np.abs(self.samples),
            None if self.endpoint is None else abs(self.endpoint),
        ).mean

    def scaled(self, factor: float) -> "TorusDensity":
        end = None if self.endpoint is None else self.endpoint * factor
        return TorusDensity(self.samples * factor, end, signed=self.signed or factor < 0)

    def normalized(self) -> "TorusDensity":
        m = self.mean
        if m <= 0:
            raise ValidationError("cannot normalize a density with nonpositive mass")
        return self.scaled(1.0 / m)

    def centered(self) -> "TorusDensity":
        """Signed perturbation ``f - mean(f)``."""
        m = self.mean
        end = None if self.endpoint is None else self.endpoint - m
        return TorusDensity(self.samples - m, end, signed=True)

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "samples": self.samples.tolist(),
            "endpoint": self.endpoint,
            "signed": self.signed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TorusDensity":
        return cls(np.asarray(data["samples"], dtype=float), data.get("endpoint"), bool(data.get("signed", False)))


# ---------------------------------------------------------------------------
# point masses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomicMeasure:
    """Weighted point masses on ``[0, 1)``.

    Locations are reduced mod 1, sorted, and coincident locations are merged
    into one atom carrying the summed weight. When ``denominator`` is given the
    locations are the exact rationals ``numerators / denominator``; Fourier
    coefficients are then computed by an FFT over ``Z/denominator``.
    """

    locations: np.ndarray
    weights: np.ndarray
    total_mass: float | None = None
    denominator: int | None = None
    numerators: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        if self.denominator is not None:
            q = int(self.denominator)
            if q < 1:
                raise ValidationError("denominator must be a positive integer")
            if self.numerators is None:
                raise ValidationError("numerators are required with a denominator")
            num = np.asarray(self.numerators, dtype=np.int64).ravel() % q
            if num.size != w.size:
                raise ValidationError("numerators and weights differ in length")
            order = np.argsort(num, kind="stable")
            num, w = num[order], w[order]
            uniq, inv = np.unique(num, return_inverse=True)
            w = np.bincount(inv, weights=w)
            num = uniq
            loc = num / q
            object.__setattr__(self, "denominator", q)
            object.__setattr__(self, "numerators", _frozen(num, dtype=np.int64))
        else:
            loc = np.asarray(self.locations, dtype=float).ravel()
            if loc.size != w.size:
                raise ValidationError("locations and weights differ in length")
            if not np.all(np.isfinite(loc)):
                raise ValidationError("locations must be finite")
            loc = loc % 1.0
            loc[loc >= 1.0] = 0.0
            order = np.argsort(loc, kind="stable")
            loc, w = loc[order], w[order]
            uniq, inv = np.unique(loc, return_inverse=True)
            w = np.bincount(inv, weights=w)
            loc = uniq
        if loc.size == 0:
            raise ValidationError("an atomic measure needs at least one atom")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValidationError("atom weights must be finite and positive")
        mass = math.fsum(w)
        if self.total_mass is not None and abs(mass - self.total_mass) > MASS_TOL * max(1.0, mass):
            raise ValidationError(
                f"weights sum to {mass!r}, declared total_mass is {self.total_mass!r}"
            )
        object.__setattr__(self, "locations", _frozen(loc))
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "total_mass", float(mass))

    @classmethod
    def empirical(cls, points) -> "AtomicMeasure":
        """Equal-weight measure ``(1/N) sum delta_{x_n}``."""
        pts = np.asarray(points, dtype=float).ravel()
        return cls(pts, np.full(pts.size, 1.0 / pts.size))

    @classmethod
    def on_lattice(cls, numerators, weights, denominator: int) -> "AtomicMeasure":
        return cls(None, weights, denominator=denominator, numerators=numerators)

    def __len__(self) -> int:
        return self.locations.size

    def normalized(self) -> "AtomicMeasure":
        return self.scaled(1.0 / self.total_mass)

    def scaled(self, factor: float) -> "AtomicMeasure":
        if self.denominator is not None:
            return AtomicMeasure(None, self.weights * factor, denominator=self.denominator, numerators=self.numerators)
        return AtomicMeasure(self.locations, self.weights * factor)

    def rotated(self, theta: float) -> "AtomicMeasure":
        return AtomicMeasure(self.locations + theta, self.weights)

    def to_dict(self) -> dict:
        out = {
            "atoms": [[float(x), float(w)] for x, w in zip(self.locations, self.weights)],
            "total_mass": self.total_mass,
        }
        if self.denominator is not None:
            out["denominator"] = self.denominator
            out["numerators"] = self.numerators.tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "AtomicMeasure":
        atoms = np.asarray(data["atoms"], dtype=float).reshape(-1, 2)
        if data.get("denominator") is not None:
            return cls(None, atoms[:, 1], data.get("total_mass"), int(data["denominator"]), data["numerators"])
        return cls(atoms[:, 0], atoms[:, 1], data.get("total_mass"))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["location", "weight"])
            for x, w in zip(self.locations, self.weights):
                writer.writerow([repr(float(x)), repr(float(w))])

    @classmethod
    def from_csv(cls, path) -> "AtomicMeasure":
        """Load a two-column ``location,weight`` file; a header row is optional."""
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if rows:
                        raise ValidationError(f"malformed atom row {row!r} in {path}")
                    continue  # header
                except IndexError:
                    raise ValidationError(f"atom rows need two columns, got {row!r}")
        if not rows:
            raise ValidationError(f"no atoms found in {path}")
        arr = np.asarray(rows)
        return cls(arr[:, 0], arr[:, 1])


# ---------------------------------------------------------------------------
# Fourier series
# ---------------------------------------------------------------------------

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class FourierSeries:
    """Coefficients ``c_k`` for ``k = -K..K`` stored in that order.

    With ``real=True`` (the default) the series represents a real function:
    conjugate symmetry ``c_{-k} = conj(c_k)`` is checked and then imposed
    exactly, and ``c_0`` is made real.
    """

    coeffs: np.ndarray
    real: bool = True

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex, copy=True).ravel()
        if c.size % 2 != 1:
            raise ValidationError("coefficient array must have odd length 2K+1")
        if not np.all(np.isfinite(c)):
            raise ValidationError("coefficients must be finite")
        K = c.size // 2
        if self.real:
            pos = c[K + 1:]
            neg = c[:K][::-1]
            scale = max(1.0, float(np.max(np.abs(c))))
            if K and np.max(np.abs(neg - np.conj(pos))) > HERMITIAN_TOL * scale:
                raise ValidationError("coefficients are not conjugate-symmetric")
            if abs(c[K].imag) > HERMITIAN_TOL * scale:
                raise ValidationError("mean coefficient of a real series must be real")
            c[K] = c[K].real
            c[:K] = np.conj(pos)[::-1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_positive(cls, c0: float, positive) -> "FourierSeries":
        """Real series from ``c_0`` and ``c_1..c_K``."""
        pos = np.asarray(positive, dtype=complex).ravel()
        return cls(np.concatenate([np.conj(pos)[::-1], [complex(c0)], pos]))

    @classmethod
    def zeros(cls, K: int) -> "FourierSeries":
        return cls(np.zeros(2 * K + 1, dtype=complex))

    @classmethod
    def constant(cls, value: float, K: int = 0) -> "FourierSeries":
        c = np.zeros(2 * K + 1, dtype=complex)
        c[K] = value
        return cls(c)

    @classmethod
    def sine(cls, n: int, amplitude: float = 1.0, K: int | None = None, offset: float = 0.0) -> "FourierSeries":
        """``offset + amplitude * sin(2 pi n x)``."""
        K = n if K is None else K
        pos = np.zeros(K, dtype=complex)
        pos[n - 1] = -0.5j * amplitude
        return cls.from_positive(offset, pos)

    @classmethod
    def cosine(cls, n: int, amplitude: float = 1.0, K: int | None = None, offset: float = 0.0) -> "FourierSeries":
        K = n if K is None else K
        pos = np.zeros(K, dtype=complex)
        pos[n - 1] = 0.5 * amplitude
        return cls.from_positive(offset, pos)

    @property
    def K(self) -> int:
        return self.coeffs.size // 2

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    @property
    def mean(self) -> complex | float:
        c0 = self.coeffs[self.K]
        return float(c0.real) if self.real else complex(c0)

    @property
    def positive(self) -> np.ndarray:
        """``c_1 .. c_K``."""
        return self.coeffs[self.K + 1:]

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.K:
            return 0j
        return complex(self.coeffs[self.K + k])

    def _new(self, c) -> "FourierSeries":
        return FourierSeries(c, real=self.real)

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        K = max(self.K, other.K)
        return self._new(self.padded(K).coeffs + other.padded(K).coeffs)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + other.scaled(-1.0)

    def scaled(self, factor: float) -> "FourierSeries":
        return self._new(self.coeffs * factor)

    def padded(self, K: int) -> "FourierSeries":
        if K < self.K:
            raise ValidationError("padding cannot shrink a series; use truncated()")
        pad = K - self.K
        return self._new(np.pad(self.coeffs, pad))

    def truncated(self, K: int) -> "FourierSeries":
        if K >= self.K:
            return self.padded(K)
        return self._new(self.coeffs[self.K - K: self.K + K + 1])

    def without_mean(self) -> "FourierSeries":
        c = self.coeffs.copy()
        c[self.K] = 0.0
        return self._new(c)

    def rotated(self, theta: float) -> "FourierSeries":
        """Series of ``x -> f(x - theta)``."""
        return self._new(self.coeffs * np.exp(-2j * np.pi * self.frequencies * theta))

    def derivative(self) -> "FourierSeries":
        return self._new(self.coeffs * (2j * np.pi * self.frequencies))

    def antiderivative(self) -> "FourierSeries":
        """Mean-zero antiderivative of the mean-zero part."""
        k = self.frequencies
        c = np.zeros_like(self.coeffs)
        nz = k != 0
        c[nz] = self.coeffs[nz] / (2j * np.pi * k[nz])
        return self._new(c)

    def l2_norm(self, exclude_mean: bool = False) -> float:
        c = self.without_mean().coeffs if exclude_mean else self.coeffs
        return float(np.sqrt(np.sum(np.abs(c) ** 2)))

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "real": self.real,
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FourierSeries":
        arr = np.asarray(data["coeffs"], dtype=float).reshape(-1, 2)
        return cls(arr[:, 0] + 1j * arr[:, 1], real=bool(data.get("real", True)))


def evaluate_series(s: FourierSeries, x) -> np.ndarray:
    """Evaluate the series at arbitrary points by direct summation."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    if s.real:
        k = np.arange(1, s.K + 1)
        out = np.full(flat.shape, s.mean, dtype=float)
        # chunked to bound the size of the phase matrix
        step = max(1, 2_000_000 // max(1, s.K))
        for i in range(0, flat.size, step):
            ph = np.exp(2j * np.pi * np.outer(flat[i:i + step], k))
            out[i:i + step] += 2.0 * (ph @ s.positive).real
        return out.reshape(x.shape)
    k = s.frequencies
    out = np.exp(2j * np.pi * np.outer(flat, k)) @ s.coeffs
    return out.reshape(x.shape)


def fourier_of_density(d: TorusDensity, K: int) -> FourierSeries:
    """Coefficients ``c_k``, ``|k| <= K``, by the trapezoid rule on the grid.

    For ``K == M/2`` the Nyquist bin is split evenly between ``+-M/2`` so that
    :func:`synthesize_grid` inverts this map exactly.
    """
    M = d.M
    if K < 0:
        raise ValidationError("K must be nonnegative")
    if K > M // 2:
        raise AliasingError(f"K={K} exceeds M/2={M // 2}; coefficients would alias")
    raw = np.fft.fft(d.samples) / M
    corr = 0.0 if d.endpoint is None else 0.5 * (d.endpoint - d.samples[0]) / M
    pos = raw[1:K + 1] + corr
    if K and 2 * K == M:
        pos[-1] = 0.5 * raw[K] + corr
    return FourierSeries.from_positive(d.mean, pos)


def fourier_of_atoms(a: AtomicMeasure, K: int) -> FourierSeries:
    """``c_j = sum_n w_n exp(-2 pi i j x_n)`` for ``|j| <= K``."""
    if K < 0:
        raise ValidationError("K must be nonnegative")
    if a.denominator is not None:
        q = a.denominator
        table = np.zeros(q)
        np.add.at(table, a.numerators, a.weights)
        spectrum = np.fft.fft(table)  # spectrum[r] = sum_n w_n e^{-2 pi i r num_n / q}
        pos = spectrum[np.arange(1, K + 1) % q]
        return FourierSeries.from_positive(a.total_mass, pos)
    pos = np.empty(K, dtype=complex)
    j = np.arange(1, K + 1)
    step = max(1, 4_000_000 // max(1, len(a)))
    for i in range(0, K, step):
        jj = j[i:i + step]
        # reduce phases mod 1 before exponentiating to keep large j accurate
        phase = np.outer(jj, a.locations) % 1.0
        pos[i:i + step] = np.exp(-2j * np.pi * phase) @ a.weights
    return FourierSeries.from_positive(a.total_mass, pos)


def synthesize_grid(s: FourierSeries, M: int) -> TorusDensity:
    """Sample the (real) series on ``x_j = j/M``."""
    K = s.K
    if M < 2 * K + 2:
        raise AliasingError(f"grid of size {M} is too small for K={K} (need M >= 2K+2)")
    if M < 4:
        raise ValidationError("grid size must be at least 4")
    arr = np.zeros(M, dtype=complex)
    arr[0] = s.coeffs[K]
    if K:
        arr[1:K + 1] = s.positive
        arr[M - K:] = s.coeffs[:K]
    values = np.fft.ifft(arr).real * M
    return TorusDensity(values, signed=bool(np.any(values < 0)))


# ---------------------------------------------------------------------------
# cumulative distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cdf:
    """Cumulative distribution ``F(x) = mu([0, x])`` on ``[0, 1]``.

    ``kind == "step"``: ``breakpoints`` are atom locations and ``values[i]``
    is the mass of ``[0, breakpoints[i]]``; ``F`` is right-continuous.

    ``kind == "linear"``: ``breakpoints`` are nodes from 0 to 1 and ``F`` is
    linear between them, i.e. the density is constant on every cell.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    kind: str

    def __post_init__(self):
        b = _frozen(self.breakpoints)
        v = _frozen(self.values)
        if self.kind not in ("step", "linear"):
            raise ValidationError(f"unknown Cdf kind {self.kind!r}")
        if b.shape != v.shape or b.ndim != 1 or b.size == 0:
            raise ValidationError("breakpoints and values must be equal-length 1-D arrays")
        if np.any(np.diff(b) < 0) or b[0] < 0 or b[-1] > 1:
            raise ValidationError("breakpoints must be sorted within [0, 1]")
        if v[0] < 0 or np.any(np.diff(v) < -1e-15 * max(1.0, abs(v[-1]))):
            raise ValidationError("Cdf values must be nonnegative and nondecreasing")
        if self.kind == "linear" and (b[0] != 0 or b[-1] != 1 or v[0] != 0):
            raise ValidationError("a linear Cdf must span [0, 1] and start at 0")
        if self.kind == "step" and b[-1] >= 1:
            raise ValidationError("atom locations must lie in [0, 1)")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", np.maximum.accumulate(v) if np.any(np.diff(v) < 0) else v)

    @classmethod
    def uniform(cls, mass: float = 1.0) -> "Cdf":
        return cls(np.array([0.0, 1.0]), np.array([0.0, float(mass)]), "linear")

    @property
    def total_mass(self) -> float:
        return float(self.values[-1])

    def __call__(self, x):
        """Right-continuous ``F(x)``."""
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            return np.interp(x, self.breakpoints, self.values)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        out = np.where(idx >= 0, self.values[np.clip(idx, 0, None)], 0.0)
        return np.where(x >= 1.0, self.total_mass, out)

    def left(self, x):
        """Left limit ``F(x^-)``."""
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            return np.interp(x, self.breakpoints, self.values)
        idx = np.searchsorted(self.breakpoints, x, side="left") - 1
        return np.where(idx >= 0, self.values[np.clip(idx, 0, None)], 0.0)

    def quantile(self, t):
        """Left-continuous inverse ``inf{x : F(x) >= t}``."""
        t = np.asarray(t, dtype=float)
        if self.kind == "step":
            idx = np.searchsorted(self.values, t, side="left")
            return self.breakpoints[np.clip(idx, 0, self.breakpoints.size - 1)]
        v, b = self.values, self.breakpoints
        idx = np.clip(np.searchsorted(v, t, side="left"), 1, v.size - 1)
        v0, v1 = v[idx - 1], v[idx]
        b0, b1 = b[idx - 1], b[idx]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(v1 > v0, (t - v0) / (v1 - v0), 1.0)
        return np.where(t <= 0, 0.0, b0 + np.clip(frac, 0, 1) * (b1 - b0))

    def scaled(self, factor: float) -> "Cdf":
        return Cdf(self.breakpoints, self.values * factor, self.kind)

    def normalized(self) -> "Cdf":
        return self.scaled(1.0 / self.total_mass)

    def segments(self):
        """Quantile function as linear pieces over mass levels.

        Returns ``(levels, lo, hi)``: on ``[levels[i], levels[i+1]]`` the
        quantile runs linearly from ``lo[i]`` to ``hi[i]``. Atoms give flat
        pieces, density cells sloped ones, and empty cells are skipped.
        """
        if self.kind == "step":
            w = np.diff(self.values, prepend=0.0)
            keep = w > 0
            levels = np.concatenate([[0.0], self.values[keep]])
            loc = self.breakpoints[keep]
            return levels, loc, loc
        masses = np.diff(self.values)
        keep = masses > 0
        levels = np.concatenate([[0.0], self.values[1:][keep]])
        return levels, self.breakpoints[:-1][keep], self.breakpoints[1:][keep]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "breakpoints": self.breakpoints.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Cdf":
        return cls(np.asarray(data["breakpoints"]), np.asarray(data["values"]), data["kind"])


Measure = Union[AtomicMeasure, TorusDensity, Cdf]


def cdf(m: Measure) -> Cdf:
    """Cumulative distribution of a nonnegative measure.

    Atoms give a step function; grid densities a piecewise-linear one
    obtained by trapezoid accumulation.
    """
    if isinstance(m, Cdf):
        return m
    if isinstance(m, AtomicMeasure):
        return Cdf(m.locations, np.cumsum(m.weights), "step")
    if isinstance(m, TorusDensity):
        if m.signed:
            raise SignedMeasureError("cdf() requires a nonnegative density; got a signed one")
        nodes = np.arange(m.M + 1) / m.M
        values = np.concatenate([[0.0], np.cumsum(m.cell_masses())])
        return Cdf(nodes, values, "linear")
    raise ValidationError(f"cannot build a Cdf from {type(m).__name__}")


def quantile_atoms(m: Measure, n: int) -> AtomicMeasure:
    """Equal-weight quantization: ``n`` atoms at the quantile midpoints."""
    if n < 1:
        raise ValidationError("need at least one atom")
    F = cdf(m)
    mass = F.total_mass
    t = (np.arange(n) + 0.5) / n * mass
    return AtomicMeasure(F.quantile(t), np.full(n, mass / n))


def load_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
