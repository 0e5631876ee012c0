"""The integral operator I(f)(z) = 1/[S_z] * int_{S_z} f(zeta) / (p(z) zeta + q(z)) dzeta.

The operator is specified by two Moebius self-maps phi1, phi2 with real
coefficients and two coefficient functions p, q.  Along the segment
S_z = [phi1(z), phi2(z)] it is written either directly, through the
parametrization r_z(t) = phi1(z) + t [S_z], or as an average of weighted
composition operators w(t, z) f(gamma(t, z)).

Evaluation is pole-aware: every map is carried as a numerator/denominator
pair and the operator quantities are assembled from cross-multiplied
products, so a meromorphic q is never divided through at one of its poles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dirichlet import AnalyticSeries
from .exceptions import (ConditionError, KernelPoleError, ShapeError, SpecError,
                         ZeroDenominatorError, PoleOnDiscError)
from .funcmaps import (AnalyticMap, ExpMap, Polynomial, RationalMap, as_map, map_from_json,
                       mobius_image_of_unit_disc, rational_eval)
from .grids import interior_t_grid
from .quadrature import QuadratureConfig, integrate

SELFMAP_TOL = 1e-12
DENOM_RTOL = 1e-14
MAX_WITNESSES = 32


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    """The quadruple (phi1, phi2, p, q)."""

    phi1: RationalMap
    phi2: RationalMap
    p: AnalyticMap
    q: AnalyticMap
    name: str | None = None

    def __post_init__(self):
        for attr in ("phi1", "phi2", "p", "q"):
            object.__setattr__(self, attr, as_map(getattr(self, attr)))
        for attr in ("phi1", "phi2"):
            phi = getattr(self, attr)
            if not isinstance(phi, RationalMap) or not phi.is_mobius:
                raise SpecError(f"{attr} must be a linear fractional map")
            try:
                disc = mobius_image_of_unit_disc(phi)
            except PoleOnDiscError as exc:
                raise SpecError(f"{attr} has a pole on the closed unit disc") from exc
            if abs(disc.center) + disc.radius > 1.0 + SELFMAP_TOL:
                raise SpecError(f"{attr} does not map the closed unit disc into itself")
        diff = self.phi1.num * self.phi2.den - self.phi2.num * self.phi1.den
        if diff.is_zero:
            raise SpecError("phi1 and phi2 coincide, so [S_z] vanishes identically")

    def with_name(self, name: str) -> "OperatorSpec":
        return OperatorSpec(self.phi1, self.phi2, self.p, self.q, name=name)

    def to_json(self) -> dict:
        out = {k: getattr(self, k).to_json() for k in ("phi1", "phi2", "p", "q")}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorSpec":
        try:
            maps = {k: map_from_json(obj[k]) for k in ("phi1", "phi2", "p", "q")}
        except KeyError as exc:
            raise SpecError(f"operator spec is missing {exc.args[0]!r}") from exc
        return cls(**maps, name=obj.get("name"))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<OperatorSpec{label} phi1={self.phi1} phi2={self.phi2} p={self.p} q={self.q}>"


_Z = [0.0, 1.0]
PRESETS = {
    # name: (phi1, phi2, p, q), straight from the classical instances
    "cesaro": (0.0, _Z, -1.0, 1.0),
    "adjoint-cesaro": (1.0, _Z, 0.0, 1.0),
    "j": (1.0, _Z, -1.0, -1.0),
    "hilbert": (0.0, 1.0, [0.0, -1.0], 1.0),
    "reduced-hilbert": (-1.0, 1.0, [0.0, -1.0], 1.0),
}
ALIASES = {"c": "cesaro", "a": "adjoint-cesaro", "h": "hilbert", "h0": "reduced-hilbert"}


def preset(name: str) -> OperatorSpec:
    key = ALIASES.get(name.lower(), name.lower())
    if key not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return OperatorSpec(*PRESETS[key], name=key)


def load_spec(path) -> OperatorSpec:
    return OperatorSpec.from_json(json.loads(Path(path).read_text()))


@dataclass
class KernelPair:
    w: complex
    gamma: complex
    gamma_dt: complex | None = None
    gamma_dz: complex | None = None
    w_dz: complex | None = None


@dataclass
class Witness:
    z: complex | None
    margin: float
    t: float | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"margin": _finite_or_none(self.margin)}
        if self.z is not None:
            out["z"] = [float(np.real(self.z)), float(np.imag(self.z))]
        if self.t is not None:
            out["t"] = float(self.t)
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Certificate:
    """Outcome of a grid check.  Witnesses are the worst failing nodes."""

    kind: str
    passed: bool
    witnesses: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    min_margin: float = float("nan")
    checked: int = 0

    def to_json(self) -> dict:
        return {"kind": self.kind, "pass": bool(self.passed),
                "witnesses": [w.to_json() for w in self.witnesses],
                "grid": self.grid, "min_margin": _finite_or_none(self.min_margin),
                "checked": int(self.checked)}


def _finite_or_none(x):
    x = float(x)
    return x if np.isfinite(x) else None


def build_certificate(kind, margins, zs=None, ts=None, notes=None, grid=None, ok=None) -> Certificate:
    """Collect margins into a Certificate.  A node fails when its margin is not
    positive, or when ``ok`` is given and is False there (for non-strict tests)."""
    margins = np.asarray(margins, dtype=float).ravel()
    fail = ~(margins > 0) if ok is None else ~np.asarray(ok, dtype=bool).ravel()
    bad = np.flatnonzero(fail)
    order = bad[np.argsort(np.where(np.isnan(margins[bad]), -np.inf, margins[bad]))]
    witnesses = []
    for i in order[:MAX_WITNESSES]:
        witnesses.append(Witness(
            z=None if zs is None else complex(np.ravel(zs)[i]),
            t=None if ts is None else float(np.ravel(ts)[i]),
            margin=float(margins[i]),
            note="" if notes is None else str(np.ravel(notes)[i])))
    min_margin = float(np.nanmin(margins)) if margins.size and not np.all(np.isnan(margins)) else float("nan")
    return Certificate(kind=kind, passed=not bool(fail.any()), witnesses=witnesses,
                       grid=dict(grid or {}), min_margin=min_margin, checked=int(margins.size))


# ---------------------------------------------------------------- evaluation


def _parts(spec: OperatorSpec, z, jets: bool = False):
    """Cross-multiplied pieces at z.

    phi1 = u1/dd, phi2 = u2/dd, p = pp/ee, q = qq/ee.
    """
    z = np.asarray(z, dtype=complex)
    (n1, d1), (n2, d2), (pn, pd), (qn, qd) = (m.jet(z) for m in (spec.phi1, spec.phi2, spec.p, spec.q))
    if not jets:
        n1, d1, n2, d2, pn, pd, qn, qd = (j.value for j in (n1, d1, n2, d2, pn, pd, qn, qd))
    return n1 * d2, n2 * d1, d1 * d2, pn * qd, qn * pd, pd * qd


def _val(x):
    return x.value if hasattr(x, "value") and not isinstance(x, np.ndarray) else x


def _squeeze(x):
    x = np.asarray(x)
    return x[()] if x.ndim == 0 else x


def segment(spec: OperatorSpec, z):
    """Endpoints phi1(z), phi2(z) and the length [S_z] = phi2(z) - phi1(z)."""
    a, b = rational_eval(spec.phi1, z), rational_eval(spec.phi2, z)
    return a, b, b - a


def _rho_parts(spec, z):
    u1, u2, dd, pp, qq, _ = _parts(spec, z)
    num = u2 * pp + qq * dd
    den = u1 * pp + qq * dd
    scale = np.maximum(np.abs(u1 * pp), np.abs(qq * dd))
    return num, den, scale


def _ray_margin(rho):
    rho = np.asarray(rho)
    dist = np.where(rho.real > 0, np.abs(rho), np.abs(rho.imag))
    return dist - 1e-14 * np.maximum(1.0, np.abs(rho))


def well_definedness_ratio(spec: OperatorSpec, z):
    """rho(z) = (p phi2 + q) / (p phi1 + q)."""
    num, den, scale = _rho_parts(spec, z)
    if np.any(np.abs(den) <= DENOM_RTOL * np.maximum(scale, 1e-300)):
        raise ZeroDenominatorError("p*phi1 + q vanishes")
    return _squeeze(num / den)


def well_defined_at(spec: OperatorSpec, z):
    """Check Re sqrt(rho(z)) > 0 under the principal branch.

    This holds exactly when rho(z) is off the closed ray (-inf, 0]; the
    returned margin is the distance of rho(z) to that ray, less a 1e-14
    relative tolerance, so failing points have a non-positive margin.
    """
    rho = well_definedness_ratio(spec, z)
    margin = _ray_margin(rho)
    return _squeeze(margin > 0), _squeeze(margin)


def well_defined_certificate(spec: OperatorSpec, grid) -> Certificate:
    z = np.asarray(grid, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("empty grid")
    if np.any(np.abs(z) > 1.0 - 1e-6 + 1e-15):
        raise ValueError("grid points must satisfy |z| <= 1 - 1e-6")
    num, den, scale = _rho_parts(spec, z)
    bad = np.abs(den) <= DENOM_RTOL * np.maximum(scale, 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.where(bad, 0.0, num / np.where(bad, 1.0, den))
    margins = np.where(bad, -1.0, _ray_margin(rho))
    notes = np.where(bad, "p*phi1+q vanishes", "")
    return build_certificate("well-defined", margins, zs=z, notes=notes,
                             grid={"points": int(z.size)})


def _kernel_raw(spec, t, z, jets, tc=None):
    u1, u2, dd, pp, qq, ee = _parts(spec, z, jets)
    t = np.asarray(t, dtype=float)
    tc = 1.0 - t if tc is None else np.asarray(tc, dtype=float)
    # jets on the left so numpy does not broadcast them into object arrays
    mix = u2 * tc + u1 * t
    B = mix * pp + qq * dd
    num = u1 * u2 * pp + (u1 * tc + u2 * t) * qq * dd
    scale = np.maximum(np.abs(_val(mix * pp)), np.abs(_val(qq * dd)))
    return u1, u2, dd, pp, qq, ee, B, num, scale


def kernel(spec: OperatorSpec, t, z, derivatives: bool = True, t_complement=None) -> KernelPair:
    """w(t, z) and gamma(t, z) of the weighted-composition representation.

    ``t`` and ``z`` broadcast against each other.  ``t_complement`` may carry
    an accurate 1 - t when t is very close to 1.
    """
    u1, u2, dd, pp, qq, ee, B, num, scale = _kernel_raw(spec, t, z, derivatives, t_complement)
    if np.any(np.abs(_val(B)) <= DENOM_RTOL * np.maximum(scale, 1e-300)):
        raise KernelPoleError("(phi2 - t[S_z]) p + q vanishes")
    gamma = num / (dd * B)
    w = dd * ee / B
    dt = (_val(u2) - _val(u1)) * (_val(u1) * _val(pp) + _val(qq) * _val(dd)) \
        * (_val(u2) * _val(pp) + _val(qq) * _val(dd)) / (_val(dd) * _val(B) ** 2)
    if derivatives:
        return KernelPair(w=_squeeze(w.value), gamma=_squeeze(gamma.value), gamma_dt=_squeeze(dt),
                          gamma_dz=_squeeze(gamma.d), w_dz=_squeeze(w.d))
    return KernelPair(w=_squeeze(w), gamma=_squeeze(gamma), gamma_dt=_squeeze(dt))


def selfmap_margins(spec: OperatorSpec, t, z):
    """1 - |gamma(t, z)|, which has the sign of RHS - LHS of the self-map inequality."""
    _, _, dd, _, _, _, B, num, _ = _kernel_raw(spec, t, z, False)
    den = np.abs(dd * B)
    with np.errstate(divide="ignore", invalid="ignore"):
        m = (den - np.abs(num)) / den
    return np.where(den > 0, m, -np.inf)


def selfmap_condition_sampled(spec: OperatorSpec, tgrid=None, zgrid=None) -> Certificate:
    """Check |phi1 phi2 p + (phi1 + t[S_z]) q| < |(phi2 - t[S_z]) p + q| on a (t, z) grid."""
    from .grids import polar_grid

    t = interior_t_grid() if tgrid is None else np.asarray(tgrid, dtype=float).ravel()
    z = polar_grid() if zgrid is None else np.asarray(zgrid, dtype=complex).ravel()
    if t.size == 0 or z.size == 0:
        raise ValueError("empty grid")
    if np.any((t <= 0) | (t >= 1)):
        raise ValueError("t nodes must lie in the open interval (0, 1)")
    T, Z = np.meshgrid(t, z, indexing="ij")
    margins = selfmap_margins(spec, T, Z)
    return build_certificate("self-map-sampled", margins, zs=Z, ts=T,
                             grid={"t_nodes": int(t.size), "z_points": int(z.size)})


def _series(f):
    if isinstance(f, AnalyticSeries):
        return f
    if callable(f):
        return f
    return AnalyticSeries(f)


def _check_points(z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("evaluation points must lie in the open unit disc")
    return z


def _require_well_defined(spec, z):
    ok, _ = well_defined_at(spec, z)
    if not np.all(ok):
        raise ConditionError("well-definedness condition fails at the evaluation point")


def apply_direct(spec: OperatorSpec, f, z, quad: QuadratureConfig | None = None):
    """I(f)(z) by quadrature of int_0^1 f(r_z(t)) / (p(z) r_z(t) + q(z)) dt."""
    quad = quad or QuadratureConfig()
    f = _series(f)
    z = _check_points(z)
    _require_well_defined(spec, z)
    u1, u2, dd, pp, qq, ee = _parts(spec, z.ravel())

    def integrand(t):
        t = t[:, None]
        mix = (1.0 - t) * u1 + t * u2
        return f(mix / dd) * dd * ee / (mix * pp + qq * dd)

    res = integrate(integrand, 0.0, 1.0, quad)
    return _squeeze(np.asarray(res.value).reshape(z.shape))


def apply_composed(spec: OperatorSpec, f, z, quad: QuadratureConfig | None = None,
                   tgrid=None):
    """I(f)(z) as int_0^1 w(t, z) f(gamma(t, z)) dt."""
    quad = quad or QuadratureConfig()
    f = _series(f)
    z = _check_points(z)
    _require_well_defined(spec, z)
    t_check = interior_t_grid() if tgrid is None else np.asarray(tgrid)
    if not np.all(selfmap_margins(spec, t_check[:, None], z.ravel()[None, :]) > 0):
        raise ConditionError("gamma(t, z) leaves the unit disc at the evaluation point")
    zf = z.ravel()

    def integrand(t):
        kp = kernel(spec, t[:, None], zf[None, :], derivatives=False)
        return kp.w * f(kp.gamma)

    res = integrate(integrand, 0.0, 1.0, quad)
    return _squeeze(np.asarray(res.value).reshape(z.shape))


# --------------------------------------------------- coefficient-vector pattern


def simple_linear(phi: RationalMap) -> tuple[float, float]:
    """(x, lam) with phi(z) = x + lam z, or ShapeError."""
    if not phi.is_polynomial or phi.num.degree > 1:
        raise ShapeError("map is not of the form x + lam z")
    poly = phi.as_polynomial()
    return poly.coeff(0), poly.coeff(1)


def _polynomial_part(m) -> Polynomial:
    if isinstance(m, ExpMap) or not m.is_polynomial:
        raise ShapeError("p and q must be polynomials")
    return m.as_polynomial()


def gamma_coeff_affine(spec: OperatorSpec):
    """Affine-in-t coefficient vectors of gamma's numerator and denominator.

    Returns (a_slope, a_const, b_slope, b_const), each of length N + 3 with
    N = max(deg p, deg q), such that a(t) = a_slope*t + a_const and likewise b.
    """
    x1, l1 = simple_linear(spec.phi1)
    x2, l2 = simple_linear(spec.phi2)
    p, q = _polynomial_part(spec.p), _polynomial_part(spec.q)
    N = max(p.degree, q.degree, 0)
    n = N + 3

    def shift(c, k):
        out = np.zeros(n)
        out[k:] = c.padded(n - k)
        return out

    P0, P1, P2 = shift(p, 0), shift(p, 1), shift(p, 2)
    Q0, Q1 = shift(q, 0), shift(q, 1)
    a_slope = (x2 - x1) * Q0 + (l2 - l1) * Q1
    a_const = x1 * (x2 * P0 + Q0) + (x1 * l2 + x2 * l1) * P1 + l1 * Q1 + l1 * l2 * P2
    b_slope = -((x2 - x1) * P0 + (l2 - l1) * P1)
    b_const = x2 * P0 + Q0 + l2 * P1
    return a_slope, a_const, b_slope, b_const


def gamma_coeff_vectors(spec: OperatorSpec, t: float):
    """Numerator and denominator coefficient vectors of gamma(t, .) in ascending powers of z."""
    a1, a0, b1, b0 = gamma_coeff_affine(spec)
    return a1 * t + a0, b1 * t + b0


def classify_gamma(spec: OperatorSpec) -> str:
    """'case1' | 'case2' | 'case3' for the linear fractional families, else 'general'."""
    try:
        _, l1 = simple_linear(spec.phi1)
        _, l2 = simple_linear(spec.phi2)
        p, q = _polynomial_part(spec.p), _polynomial_part(spec.q)
    except ShapeError:
        return "general"
    if p.degree > 1 or q.degree > 1:
        return "general"
    if l1 == 0 and l2 == 0:
        return "case1"
    if p.is_zero and q.degree <= 0:
        return "case3"
    if l1 == 0 and p.degree <= 0 and q.degree <= 0:
        return "case2"
    return "general"
