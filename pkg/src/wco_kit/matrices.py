"""Matrix avatars of the operator: the Hankel-type family M1, the lower-triangular
family M2, finite sections in the weighted D_alpha basis, and spectral norms.

Matrices are plain 2-D numpy arrays; column k holds the image of z^k.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dirichlet import dirichlet_weights
from .exceptions import ConditioningWarning, ConditionError, DimensionError, NonConvergenceError, SpecError
from .funcmaps import ExpMap
from .operator import OperatorSpec, _parts, _rho_parts, _ray_margin
from .quadrature import QuadratureConfig, composite_rule

DD_STABLE_GAP = 0.1


def _standing_condition(c: float, s: float, e1: float, e2: float) -> bool:
    # (c + s e2)(c + s e1) >= 0 and (c - s e2)(c - s e1) >= 0; equality is admitted because
    # the Hilbert and Cesaro parameters sit exactly on it
    return (c + s * e2) * (c + s * e1) >= 0 and (c - s * e2) * (c - s * e1) >= 0


@dataclass(frozen=True)
class M1Params:
    p0: float
    q0: float
    x1: float
    x2: float

    def __post_init__(self):
        if not -1.0 <= self.x1 < self.x2 <= 1.0:
            raise SpecError("need -1 <= x1 < x2 <= 1")
        if self.q0 == 0:
            raise SpecError("q0 must be nonzero")
        if not _standing_condition(self.q0, self.p0, self.x1, self.x2):
            raise SpecError("(q0 +- p0 x2)(q0 +- p0 x1) must be non-negative")


@dataclass(frozen=True)
class M2Params:
    p0: float
    q0: float
    lambda1: float
    lambda2: float

    def __post_init__(self):
        if not -1.0 <= self.lambda1 < self.lambda2 <= 1.0:
            raise SpecError("need -1 <= lambda1 < lambda2 <= 1")
        if self.q0 == 0:
            raise SpecError("q0 must be nonzero")
        if not _standing_condition(self.q0, self.p0, self.lambda1, self.lambda2):
            raise SpecError("(q0 +- p0 lambda1)(q0 +- p0 lambda2) must be non-negative")


MATRIX_PRESETS = {
    "hilbert": M1Params(-1.0, 1.0, 0.0, 1.0),
    "reduced-hilbert": M1Params(-1.0, 1.0, -1.0, 1.0),
    "cesaro": M2Params(-1.0, 1.0, 0.0, 1.0),
}


def divided_power(a: float, b: float, m: int) -> float:
    """(b^m - a^m) / ((b - a) m), summed termwise when a and b are close."""
    if m < 1:
        raise ValueError("m must be positive")
    if abs(b - a) < DD_STABLE_GAP:
        return math.fsum(b ** i * a ** (m - 1 - i) for i in range(m)) / m
    return (b ** m - a ** m) / ((b - a) * m)


def m1_entry(params: M1Params, n: int, k: int) -> float:
    p0, q0 = params.p0, params.q0
    return (-1) ** n * p0 ** n / q0 ** (n + 1) * divided_power(params.x1, params.x2, n + k + 1)


def m2_entry(params: M2Params, n: int, k: int) -> float:
    if n < k:
        return 0.0
    p0, q0 = params.p0, params.q0
    return (-1) ** (n - k) / q0 * (p0 / q0) ** (n - k) * divided_power(params.lambda1, params.lambda2, n + 1)


def truncate(family, N: int) -> np.ndarray:
    """N x N section of M1 or M2."""
    if N < 1:
        raise DimensionError("section size must be >= 1")
    entry = m1_entry if isinstance(family, M1Params) else m2_entry if isinstance(family, M2Params) else None
    if entry is None:
        raise TypeError("family must be M1Params or M2Params")
    out = np.empty((N, N))
    for n in range(N):
        for k in range(N):
            out[n, k] = entry(family, n, k)
    return out


def apply_matrix(M: np.ndarray, v) -> np.ndarray:
    M = np.asarray(M)
    v = np.asarray(v)
    if M.ndim != 2 or v.ndim != 1 or v.shape[0] != M.shape[1]:
        raise DimensionError(f"cannot apply a {M.shape} matrix to a vector of shape {v.shape}")
    return M @ v


def matrix_family_for(spec: OperatorSpec):
    """M1Params or M2Params when the spec belongs to one of the two families, else None."""
    phis, pq = (spec.phi1, spec.phi2), (spec.p, spec.q)
    if any(isinstance(m, ExpMap) or not m.is_polynomial for m in pq):
        return None
    if not all(ph.is_polynomial for ph in phis):
        return None
    P, Q = (m.as_polynomial() for m in pq)
    A = [ph.as_polynomial() for ph in phis]
    if Q.degree != 0:
        return None
    try:
        if all(a.degree <= 0 for a in A) and P.degree <= 1 and P.coeff(0) == 0:
            return M1Params(P.coeff(1), Q.coeff(0), A[0].coeff(0), A[1].coeff(0))
        if all(a.coeff(0) == 0 and a.degree <= 1 for a in A) and P.degree <= 0:
            return M2Params(P.coeff(0), Q.coeff(0), A[0].coeff(1), A[1].coeff(1))
    except SpecError:
        return None
    return None


def default_extraction(N: int) -> tuple[float, int]:
    """Radius with r^N = 1e-3 and the next power of two >= 8N samples."""
    r = 10.0 ** (-3.0 / max(N, 1))
    M = 1 << max(3, math.ceil(math.log2(8 * N)))
    return r, M


def power_images(spec: OperatorSpec, N: int, z: np.ndarray, quad: QuadratureConfig | None = None) -> np.ndarray:
    """V[m, k] = I(zeta^k)(z_m) for k < N by composite Gauss-Legendre on the direct form."""
    quad = quad or QuadratureConfig()
    u1, u2, dd, pp, qq, ee = _parts(spec, z)

    def images(panels):
        t, w = composite_rule(0.0, 1.0, quad.nodes, panels)
        V = np.empty((z.size, N), dtype=complex)
        mix = (1.0 - t[:, None]) * u1 + t[:, None] * u2
        r = mix / dd
        weight = w[:, None] * dd * ee / (mix * pp + qq * dd)
        for k in range(N):
            V[:, k] = weight.sum(axis=0)
            weight = weight * r
        return V

    prev = images(1)
    for level in range(1, quad.max_refinements + 1):
        cur = images(2 ** level)
        if np.max(np.abs(cur - prev)) < quad.tol * max(1.0, float(np.max(np.abs(cur)))):
            return cur
        prev = cur
    raise NonConvergenceError("power images did not converge")


def operator_coefficients(spec: OperatorSpec, N: int, extraction=None, quad=None,
                          method: str = "quadrature") -> np.ndarray:
    """Unweighted N x N matrix C with C[n, k] = coefficient of z^n in I(z^k).

    ``method="auto"`` uses the closed-form M1/M2 entries when the spec belongs
    to one of those families and falls back to quadrature otherwise.
    """
    if method not in ("auto", "quadrature", "exact"):
        raise ValueError(f"unknown method {method!r}")
    if method != "quadrature":
        family = matrix_family_for(spec)
        if family is not None:
            return truncate(family, N)
        if method == "exact":
            raise SpecError("spec is not in the M1 or M2 family")
    r, M = extraction if extraction is not None else default_extraction(N)
    if M < 4 * N or M & (M - 1):
        raise ValueError("sample count must be a power of two >= 4N")
    if not 0 < r < 1:
        raise ValueError("extraction radius must lie in (0, 1)")
    z = r * np.exp(2j * np.pi * np.arange(M) / M)
    num, den, scale = _rho_parts(spec, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        margins = _ray_margin(num / den)
    if np.any(~(margins > 0)) or np.any(np.abs(den) <= 1e-14 * scale):
        raise ConditionError("operator is not well defined on the extraction circle")
    scale_n = r ** np.arange(N, dtype=float)
    if scale_n[-1] < 1e-12:
        warnings.warn(f"r^N = {scale_n[-1]:.2e} amplifies quadrature error", ConditioningWarning, stacklevel=2)
    V = power_images(spec, N, z, quad)
    C = np.fft.fft(V, axis=0)[:N] / M / scale_n[:, None]
    return C


def finite_section(spec: OperatorSpec, alpha: float, N: int, extraction=None, quad=None,
                   method: str = "quadrature") -> np.ndarray:
    """N x N matrix of the operator in the orthonormal basis z^k / sqrt(w_k) of D_alpha.

    Real specs give real matrices; the imaginary part is dropped only when it
    is at rounding level.
    """
    C = operator_coefficients(spec, N, extraction, quad, method)
    w = dirichlet_weights(N, alpha)
    T = np.sqrt(w)[:, None] * C / np.sqrt(w)[None, :]
    if np.max(np.abs(T.imag)) <= 1e-9 * max(1.0, float(np.max(np.abs(T)))):
        return T.real.copy()
    return T


class NormEstimate(NamedTuple):
    value: float
    converged: bool
    iterations: int


def spectral_norm(T, iterations: int = 10_000, tol: float = 1e-10, strict: bool = False) -> NormEstimate:
    """Largest singular value by power iteration on T^H T from a fixed start vector."""
    T = np.asarray(T)
    if T.ndim != 2 or T.size == 0:
        raise DimensionError("need a non-empty matrix")
    if not np.all(np.isfinite(T)):
        raise ValueError("matrix has non-finite entries")
    n = T.shape[1]
    v = np.ones(n, dtype=T.dtype) + np.linspace(0.0, 0.5, n)
    v /= np.linalg.norm(v)
    est = 0.0
    for it in range(1, iterations + 1):
        u = T.conj().T @ (T @ v)
        lam = float(np.linalg.norm(u))
        if lam == 0.0:
            return NormEstimate(0.0, True, it)
        v = u / lam
        if abs(lam - est) <= tol * lam:
            return NormEstimate(math.sqrt(lam), True, it)
        est = lam
    if strict:
        raise NonConvergenceError(f"power iteration did not converge in {iterations} steps")
    return NormEstimate(math.sqrt(est), False, iterations)
