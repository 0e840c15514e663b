"""Number-theoretic point measures and Diophantine diagnostics.

Irrational rotation numbers are held as exact fractions with about sixty
significant digits, so ``{n alpha}`` is reduced mod 1 in integer arithmetic
and only converted to floating point at the end.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import SizeCapError, ValidationError
from .measures import AtomicMeasure, fourier_of_atoms

__all__ = [
    "RationalAlphaWarning",
    "PrimeResidueSpec",
    "KroneckerSpec",
    "is_prime",
    "parse_alpha",
    "quadratic_residue_measure",
    "gauss_magnitude_check",
    "kronecker_measure",
    "nearest_int_distance",
    "badly_approximable_floor",
]

DIGITS = 60
KRONECKER_CAP = 10_000_000

AlphaLike = Union[str, float, int, Fraction, Decimal]


class RationalAlphaWarning(UserWarning):
    """The rotation number is rational with a small denominator."""


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    for d in range(3, r + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeResidueSpec:
    """An odd prime ``p``."""

    p: int

    def __post_init__(self):
        p = int(self.p)
        if p < 3 or not is_prime(p):
            raise ValidationError(f"{self.p!r} is not an odd prime")
        object.__setattr__(self, "p", p)


def parse_alpha(alpha: AlphaLike) -> Fraction:
    """Exact fraction for a rotation number.

    Accepted tags: ``"sqrt2"``, ``"sqrtN"`` for a non-square integer N,
    ``"golden"``, a ratio ``"a/b"``, or any decimal string. Floats are taken
    at their shortest decimal representation.
    """
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, int):
        return Fraction(alpha)
    if isinstance(alpha, float):
        if not math.isfinite(alpha):
            raise ValidationError("alpha must be finite")
        return Fraction(Decimal(repr(alpha)))
    if isinstance(alpha, Decimal):
        return Fraction(alpha)
    tag = str(alpha).strip().lower()
    with localcontext() as ctx:
        ctx.prec = DIGITS
        if tag == "golden":
            return Fraction((1 + Decimal(5).sqrt()) / 2)
        if tag.startswith("sqrt"):
            try:
                n = int(tag[4:])
            except ValueError:
                raise ValidationError(f"cannot parse alpha tag {alpha!r}") from None
            if n < 0:
                raise ValidationError("square root of a negative number")
            if math.isqrt(n) ** 2 == n:
                return Fraction(math.isqrt(n))
            return Fraction(Decimal(n).sqrt())
        if "/" in tag:
            num, den = tag.split("/", 1)
            try:
                return Fraction(int(num), int(den))
            except (ValueError, ZeroDivisionError):
                raise ValidationError(f"cannot parse alpha ratio {alpha!r}") from None
        try:
            return Fraction(Decimal(tag))
        except Exception:
            raise ValidationError(f"cannot parse alpha {alpha!r}") from None


def _frac_parts(num: int, den: int, ks: np.ndarray) -> np.ndarray:
    """Integer numerators ``k * num mod den`` as an object array."""
    return (ks.astype(object) * num) % den


def _to_float(r: np.ndarray, den: int) -> np.ndarray:
    # 64 extra bits keep the conversion exact to well below double rounding
    return np.array([float(v) for v in ((r << 64) // den)]) / 2.0 ** 64


@dataclass(frozen=True)
class KroneckerSpec:
    """Rotation number ``alpha`` (exact fraction), count ``N`` and an estimate of
    ``c = inf_k k ||k alpha||`` over ``k <= N``."""

    alpha: Fraction
    N: int
    c_estimate: float = field(default=float("nan"))

    @classmethod
    def build(cls, alpha: AlphaLike, N: int) -> "KroneckerSpec":
        a = parse_alpha(alpha)
        if N < 1:
            raise ValidationError("N must be >= 1")
        c = badly_approximable_floor(a, min(int(N), 100_000))
        return cls(a, int(N), c)


def quadratic_residue_measure(spec: PrimeResidueSpec | int) -> AtomicMeasure:
    """Atoms at ``{k^2 / p}``, ``k = 1..p``, each of weight ``1/p``; repeats are stacked."""
    if not isinstance(spec, PrimeResidueSpec):
        spec = PrimeResidueSpec(spec)
    p = spec.p
    k = np.arange(1, p + 1, dtype=np.int64)
    return AtomicMeasure.on_lattice((k * k) % p, np.full(p, 1.0 / p), p)


def gauss_magnitude_check(spec: PrimeResidueSpec | int, j_max: int) -> float:
    """Largest deviation of ``|mu^(j)|``, ``1 <= j <= j_max``, from 1 (if p | j) or ``p^{-1/2}``."""
    if not isinstance(spec, PrimeResidueSpec):
        spec = PrimeResidueSpec(spec)
    if j_max < 1:
        raise ValidationError("j_max must be >= 1")
    mu = quadratic_residue_measure(spec)
    mags = np.abs(fourier_of_atoms(mu, j_max).positive)
    j = np.arange(1, j_max + 1)
    predicted = np.where(j % spec.p == 0, 1.0, spec.p ** -0.5)
    return float(np.max(np.abs(mags - predicted)))


def kronecker_measure(alpha: AlphaLike, N: int) -> AtomicMeasure:
    """Equal-weight atoms at ``{n alpha}``, ``n = 1..N``."""
    N = int(N)
    if N < 1:
        raise ValidationError("N must be >= 1")
    if N > KRONECKER_CAP:
        raise SizeCapError(f"N={N} exceeds the precision cap {KRONECKER_CAP}")
    a = parse_alpha(alpha)
    num, den = a.numerator, a.denominator
    if den <= N:
        warnings.warn(
            f"alpha = {a} is rational with denominator {den} <= N; the orbit is periodic",
            RationalAlphaWarning,
            stacklevel=2,
        )
    r = _frac_parts(num, den, np.arange(1, N + 1))
    x = _to_float(r, den)
    return AtomicMeasure(x, np.full(N, 1.0 / N))


def nearest_int_distance(x) -> float:
    """``||x||``, the distance from ``x`` to the nearest integer."""
    if isinstance(x, Fraction):
        f = x - math.floor(x)
        return float(min(f, 1 - f))
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError("x must be finite")
    f = x - math.floor(x)
    return min(f, 1.0 - f)


def badly_approximable_floor(alpha: AlphaLike, k_max: int) -> float:
    """``min_{1 <= k <= k_max} k ||k alpha||`` in exact arithmetic."""
    k_max = int(k_max)
    if k_max < 1:
        raise ValidationError("k_max must be >= 1")
    a = parse_alpha(alpha)
    num, den = a.numerator, a.denominator
    ks = np.arange(1, k_max + 1)
    r = _frac_parts(num, den, ks)
    dist = np.minimum(r, den - r)
    prod = dist * ks.astype(object)
    i = int(np.argmin(prod))
    return float(Fraction(int(prod[i]), den))
