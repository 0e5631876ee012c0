"""Weighted Dirichlet spaces D_alpha: series, norm, growth bound, coefficient extraction."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import ConditioningWarning, DomainError
from .quadrature import QuadratureConfig  # noqa: F401  re-exported for callers

DEFAULT_RADIUS = 0.6
DEFAULT_SAMPLES = 512
DEFAULT_ORDER = 64
TAIL_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class AnalyticSeries:
    """Truncated Taylor series sum_n a_n z^n."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else -1

    def __len__(self):
        return self.coeffs.size

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros(z.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc[()] if acc.ndim == 0 else acc

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=complex)
        m = min(n, self.coeffs.size)
        out[:m] = self.coeffs[:m]
        return out

    def __add__(self, other: "AnalyticSeries") -> "AnalyticSeries":
        n = max(len(self), len(other))
        return AnalyticSeries(self.padded(n) + other.padded(n))

    def __sub__(self, other: "AnalyticSeries") -> "AnalyticSeries":
        n = max(len(self), len(other))
        return AnalyticSeries(self.padded(n) - other.padded(n))

    def __mul__(self, scalar) -> "AnalyticSeries":
        return AnalyticSeries(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "AnalyticSeries":
        raw = obj["coeffs"] if isinstance(obj, dict) else obj
        vals = []
        for c in raw:
            if isinstance(c, (list, tuple)):
                if len(c) != 2:
                    raise ValueError("complex coefficients are [re, im] pairs")
                vals.append(complex(c[0], c[1]))
            else:
                vals.append(complex(c))
        return cls(vals)

    def __repr__(self):
        return f"AnalyticSeries({np.array2string(self.coeffs, precision=6)})"


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    return alpha


def dirichlet_weights(n: int, alpha: float) -> np.ndarray:
    """Weights 1, 1^{1-alpha}, 2^{1-alpha}, ... of the coefficient norm."""
    alpha = _check_alpha(alpha)
    with np.errstate(divide="ignore"):
        w = np.arange(n, dtype=float) ** (1.0 - alpha)
    if n:
        w[0] = 1.0
    return w


def dirichlet_norm(f, alpha: float) -> float:
    """sqrt(|a_0|^2 + sum_{n>=1} n^{1-alpha} |a_n|^2)."""
    c = f.coeffs if isinstance(f, AnalyticSeries) else np.asarray(f, dtype=complex).ravel()
    w = dirichlet_weights(c.size, alpha)
    return float(np.sqrt(np.sum(w * np.abs(c) ** 2)))


def growth_majorant(alpha: float, r: float) -> float:
    """M(alpha, r) = sqrt(1 + sum_{n>=1} n^{alpha-1} r^{2n}).

    Cauchy-Schwarz against the norm weights gives |f(z)| <= M(alpha, |z|) ||f||.
    """
    alpha = _check_alpha(alpha)
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r}")
    x = r * r
    if x == 0.0:
        return 1.0
    total = 1.0
    start = 1
    chunk = 4096
    while True:
        n = np.arange(start, start + chunk, dtype=float)
        terms = n ** (alpha - 1.0) * np.exp(n * np.log(x))
        total += float(terms.sum())
        last = n[-1]
        # successive term ratio beyond `last` is at most ((last+1)/last)^{alpha-1} x
        ratio = max(1.0, (1.0 + 1.0 / last) ** (alpha - 1.0)) * x
        if ratio < 1.0:
            tail = terms[-1] * ratio / (1.0 - ratio)
            if tail < TAIL_TOL * total:
                return float(np.sqrt(total))
        start += chunk
        chunk *= 2


def coeffs_from_samples(sampler, r: float = DEFAULT_RADIUS, N: int = DEFAULT_ORDER,
                        M: int = DEFAULT_SAMPLES) -> AnalyticSeries:
    """Taylor coefficients a_0..a_N from M samples on the circle |z| = r (discrete Fourier)."""
    r = float(r)
    if not 0.0 < r < 1.0:
        raise DomainError(f"extraction radius must lie in (0, 1), got {r}")
    if N < 0:
        raise ValueError("N must be non-negative")
    if M < 4 * max(N, 1) or M & (M - 1):
        raise ValueError("M must be a power of two with M >= 4N")
    z = r * np.exp(2j * np.pi * np.arange(M) / M)
    vals = np.asarray(sampler(z), dtype=complex)
    if vals.shape != z.shape:
        vals = np.broadcast_to(vals, z.shape)
    scale = r ** np.arange(N + 1, dtype=float)
    if scale[-1] < 1e-12:
        warnings.warn(f"r^N = {scale[-1]:.2e} amplifies sample noise", ConditioningWarning, stacklevel=2)
    a = np.fft.fft(vals)[: N + 1] / M / scale
    return AnalyticSeries(a)
