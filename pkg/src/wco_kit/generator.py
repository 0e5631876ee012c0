"""Manufacturing well-defined operators from (phi1, phi2, p, omega).

Given a self-map omega of the disc, the choice

    q = ([S_z] (1 - omega)^2 / (4 omega) - phi1) p

makes (p phi2 + q) / (p phi1 + q) = ((1 + omega) / (1 - omega))^2, whose
principal square root has positive real part, and collapses the kernel to

    gamma = phi1 + [S_z] psi,   psi = t (1 - omega)^2 / (1 + (2 - 4t) omega + omega^2),

independently of p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (KernelPoleError, PoleOnDiscError, SpecError, ZeroOmegaError)
from .funcmaps import AnalyticMap, ExpMap, RationalMap, as_map, map_from_json, mobius_image_of_unit_disc
from .grids import interior_t_grid, polar_grid
from .operator import (MAX_WITNESSES, Certificate, KernelPair, OperatorSpec, _rho_parts, _squeeze,
                       build_certificate, kernel, selfmap_condition_sampled)

OMEGA_TOL = 1e-12
IDENTITY_TOL = 1e-10
BOUNDARY_SAMPLES = 4096
BOUNDARY_MARGIN = 1e-9


def _check_omega(omega: RationalMap) -> None:
    if omega.num.is_zero:
        raise ZeroOmegaError("omega vanishes identically")
    if omega.is_mobius:
        try:
            disc = mobius_image_of_unit_disc(omega)
        except PoleOnDiscError as exc:
            raise SpecError("omega has a pole on the closed unit disc") from exc
        if abs(disc.center) + disc.radius > 1.0 + 1e-12:
            raise SpecError("omega does not map the unit disc into itself")
        return
    if np.any(np.abs(omega.poles()) <= 1.0 + 1e-12):
        raise SpecError("omega has a pole on the closed unit disc")
    edge = np.exp(2j * np.pi * np.arange(BOUNDARY_SAMPLES) / BOUNDARY_SAMPLES)
    if np.max(np.abs(omega(edge))) > 1.0 + BOUNDARY_MARGIN:
        raise SpecError("omega does not map the unit disc into itself (boundary sampling)")


@dataclass(frozen=True, eq=False)
class GeneratorInput:
    phi1: RationalMap
    phi2: RationalMap
    p: AnalyticMap
    omega: RationalMap
    name: str | None = None

    def __post_init__(self):
        for attr in ("phi1", "phi2", "p", "omega"):
            object.__setattr__(self, attr, as_map(getattr(self, attr)))
        if not isinstance(self.omega, RationalMap):
            raise SpecError("omega must be rational")
        _check_omega(self.omega)
        # reuse the operator-level checks on phi1, phi2
        OperatorSpec(self.phi1, self.phi2, RationalMap.constant(0.0), RationalMap.constant(1.0))
        if isinstance(self.p, RationalMap) and self.p.num.is_zero:
            raise SpecError("p must not vanish identically")

    def to_json(self) -> dict:
        out = {k: getattr(self, k).to_json() for k in ("phi1", "phi2", "p", "omega")}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorInput":
        try:
            maps = {k: map_from_json(obj[k]) for k in ("phi1", "phi2", "p", "omega")}
        except KeyError as exc:
            raise SpecError(f"generator input is missing {exc.args[0]!r}") from exc
        return cls(**maps, name=obj.get("name"))


def derive_q(gin: GeneratorInput):
    """q = ([S_z] (1 - omega)^2 / (4 omega) - phi1) p, simplified when p is rational.

    With p = scale * exp the rational factor is folded into the scale, so the
    result stays a closed ExpMap.
    """
    if gin.omega.num.is_zero:
        raise ZeroOmegaError("omega vanishes identically")
    S = gin.phi2 - gin.phi1
    one_minus = 1.0 - gin.omega
    factor = S * one_minus * one_minus / (4.0 * gin.omega) - gin.phi1
    return factor * gin.p


def evaluate_q(gin: GeneratorInput, z):
    """Pointwise q(z) straight from the defining formula (no simplification)."""
    z = np.asarray(z, dtype=complex)
    om = gin.omega(z)
    if np.any(np.abs(om) <= OMEGA_TOL):
        raise ZeroOmegaError("omega(z) = 0 at an evaluation point")
    a, b = gin.phi1(z), gin.phi2(z)
    out = ((b - a) * (1.0 - om) ** 2 / (4.0 * om) - a) * gin.p(z)
    return out[()] if out.ndim == 0 else out


def generated_spec(gin: GeneratorInput) -> OperatorSpec:
    return OperatorSpec(gin.phi1, gin.phi2, gin.p, derive_q(gin), name=gin.name)


def _as_jet(m, z):
    n, d = m.jet(z)
    return n / d


def generated_kernel(gin: GeneratorInput, t, z, spec: OperatorSpec | None = None) -> KernelPair:
    """gamma = phi1 + [S_z] psi and gamma_t = [S_z] (1 - omega^2)^2 / D^2, D = 1 + (2 - 4t) omega + omega^2.

    The weight w comes from the pole-aware kernel of the derived spec, which
    avoids the 0/0 in 4 omega / (p [S_z] D) where p or [S_z] vanish.
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=complex)
    om = _as_jet(gin.omega, z)
    if np.any(np.abs(om.value) <= OMEGA_TOL):
        raise ZeroOmegaError("omega(z) = 0 at an evaluation point")
    a = _as_jet(gin.phi1, z)
    S = _as_jet(gin.phi2, z) - a
    D = om * (2.0 - 4.0 * t) + om * om + 1.0
    if np.any(np.abs(D.value) <= 1e-14 * np.maximum(1.0, np.abs(om.value))):
        raise KernelPoleError("1 + (2 - 4t) omega + omega^2 vanishes")
    one_minus = 1.0 - om
    gamma = a + S * one_minus * one_minus * t / D
    dt = S.value * (1.0 - om.value ** 2) ** 2 / D.value ** 2
    base = kernel(spec if spec is not None else generated_spec(gin), t, z)
    return KernelPair(w=base.w, gamma=_squeeze(gamma.value), gamma_dt=_squeeze(dt),
                      gamma_dz=_squeeze(gamma.d), w_dz=base.w_dz)


def identity_margins(gin: GeneratorInput, z, spec: OperatorSpec | None = None):
    """IDENTITY_TOL minus |sqrt(rho) - (1 + omega)/(1 - omega)|, relative to the right-hand side."""
    spec = spec if spec is not None else generated_spec(gin)
    z = np.asarray(z, dtype=complex).ravel()
    num, den, _ = _rho_parts(spec, z)
    om = gin.omega(z)
    rhs = (1.0 + om) / (1.0 - om)
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = np.sqrt(num / den)
        err = np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))
    return np.where(np.isfinite(err), IDENTITY_TOL - err, -np.inf), rhs.real


def verify_generated(gin: GeneratorInput, zgrid=None, tgrid=None) -> Certificate:
    """The square-root identity at every z node, then the sampled self-map test on the derived spec."""
    z = polar_grid(21, 21) if zgrid is None else np.asarray(zgrid, dtype=complex).ravel()
    t = interior_t_grid() if tgrid is None else np.asarray(tgrid, dtype=float).ravel()
    spec = generated_spec(gin)
    margins, re_rhs = identity_margins(gin, z, spec)
    ident = build_certificate("generated-identity", margins, zs=z,
                              notes=np.where(re_rhs > 0, "identity", "Re (1+w)/(1-w) <= 0"),
                              ok=(margins > 0) & (re_rhs > 0))
    smap = selfmap_condition_sampled(spec, t, z)
    witnesses = (ident.witnesses + smap.witnesses)[:MAX_WITNESSES]
    return Certificate(kind="generated", passed=ident.passed and smap.passed, witnesses=witnesses,
                       grid={"z_points": int(z.size), "t_points": int(t.size)},
                       min_margin=float(min(ident.min_margin, smap.min_margin)),
                       checked=ident.checked + smap.checked)


_Z = [0.0, 1.0]
TABLE6 = {
    # case: (phi1, phi2, p, omega)
    1: (-1.0, 1.0, [0.0, 2.0], [0.0, 1.0 / 3.0]),
    2: (-1.0, 1.0, ExpMap(), [0.0, 1.0 / 3.0]),
    3: (0.0, _Z, [1.0, -1.0, 1.0, 1.0], [0.0, 1.0 / 3.0]),
    4: (0.0, _Z, [2.0, -1.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0 / 3.0]),
    5: (0.0, _Z, _Z, RationalMap.mobius(2.0, -1.0, 3.0, -6.0)),
    6: (0.0, RationalMap.mobius(2.0, -1.0, 1.0, -2.0), _Z, [0.0, 0.25]),
}


def table6_input(case: int) -> GeneratorInput:
    if case not in TABLE6:
        raise KeyError(f"Table 6 has cases 1..6, got {case}")
    return GeneratorInput(*TABLE6[case], name=f"table6-case{case}")


def generator_preset(name: str) -> GeneratorInput:
    key = name.lower()
    if not key.startswith("table6-case"):
        raise KeyError(f"unknown generator preset {name!r}; use table6-case1..6")
    return table6_input(int(key[len("table6-case"):]))
