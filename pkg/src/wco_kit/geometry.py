"""Exact self-map test: for fixed z, t -> gamma(t, z) is a Moebius map in t.

The image of [0, 1] is then a circular arc (or a segment) from gamma(0, z)
to gamma(1, z) avoiding gamma(infinity, z), and containment in the closed
disc reduces to the largest modulus along that arc.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInputError, PoleError
from .funcmaps import Circle, circle_through_three_points
from .grids import polar_grid
from .operator import Certificate, OperatorSpec, _parts, build_certificate

DEGENERATE_TOL = 1e-13
POLE_TOL = 1e-12
DISC_TOL = 1e-12


@dataclass(frozen=True)
class TMobius:
    """gamma(t) = (R1 t + R2) / (R3 t + R4), coefficients scaled so max |R| = 1."""

    R1: complex
    R2: complex
    R3: complex
    R4: complex
    # exact endpoint values phi1(z), phi2(z) when known; these avoid cancellation in R3 + R4
    at0: complex | None = None
    at1: complex | None = None

    @property
    def determinant(self) -> complex:
        return self.R1 * self.R4 - self.R2 * self.R3

    @property
    def constant_in_t(self) -> bool:
        scale = max(abs(self.R1), abs(self.R2), abs(self.R3), abs(self.R4))
        return abs(self.determinant) <= DEGENERATE_TOL * scale * scale

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = (self.R1 * t + self.R2) / (self.R3 * t + self.R4)
        return out[()] if out.ndim == 0 else out

    def pole(self) -> complex | None:
        """The t where the denominator vanishes, None when R3 is negligible."""
        if abs(self.R3) <= DEGENERATE_TOL * max(abs(self.R3), abs(self.R4)) or self.R3 == 0:
            return None
        return -self.R4 / self.R3


@dataclass(frozen=True)
class Arc:
    """Image of t in [0, 1].

    kind is "segment", "circle" or "unbounded" (the pole in t lies in [0, 1]).
    For circles the arc starts at angle ``start`` about the carrier centre and
    sweeps ``sweep`` radians (signed) to reach e1.
    """

    e0: complex
    e1: complex
    kind: str
    max_modulus: float
    carrier: Circle | None = None
    excluded: complex | None = None
    start: float = 0.0
    sweep: float = 0.0

    def contains_angle(self, angle: float, slack: float = 1e-12) -> bool:
        if self.kind != "circle":
            raise ValueError("angular parameter only defined on circular arcs")
        return _on_sweep(self.start, self.sweep, angle, slack)


def _coeff_arrays(spec: OperatorSpec, z):
    """Rows R1..R4 (unscaled), the row-wise scale, and the endpoints phi1(z), phi2(z)."""
    u1, u2, dd, pp, qq, _ = _parts(spec, z)
    s = u2 - u1
    end2 = u2 * pp + qq * dd
    R = np.stack([s * qq * dd, u1 * end2, -s * pp * dd, dd * end2])
    return R, np.max(np.abs(R), axis=0), u1 / dd, u2 / dd


def t_mobius(spec: OperatorSpec, z: complex) -> TMobius:
    """R1 = [S_z] q, R2 = phi1 (p phi2 + q), R3 = -[S_z] p, R4 = p phi2 + q, up to a common factor."""
    R, scale, e0, e1 = _coeff_arrays(spec, np.asarray([z], dtype=complex))
    if not np.isfinite(scale[0]) or scale[0] == 0:
        raise PoleError("gamma is undefined at z")
    return TMobius(*(complex(r) for r in R[:, 0] / scale[0]), at0=complex(e0[0]), at1=complex(e1[0]))


def _wrap(a: float) -> float:
    return a % (2.0 * math.pi)


def _on_sweep(start: float, sweep: float, angle: float, slack: float) -> bool:
    if sweep >= 0:
        d = _wrap(angle - start)
        return d <= sweep + slack or d >= 2.0 * math.pi - slack
    d = _wrap(start - angle)
    return d <= -sweep + slack or d >= 2.0 * math.pi - slack


def _segment(e0, e1, excluded=None) -> Arc:
    return Arc(e0=e0, e1=e1, kind="segment", max_modulus=max(abs(e0), abs(e1)), excluded=excluded)


def arc_of_t(tm: TMobius) -> Arc:
    if tm.constant_in_t:
        raise DegenerateInputError("gamma does not depend on t at this z")
    t_pole = tm.pole()
    if t_pole is not None and abs(t_pole.imag) <= POLE_TOL * max(1.0, abs(t_pole)) \
            and -POLE_TOL <= t_pole.real <= 1.0 + POLE_TOL:
        return Arc(e0=complex("nan"), e1=complex("nan"), kind="unbounded", max_modulus=math.inf)
    e0 = tm.R2 / tm.R4 if tm.at0 is None else tm.at0
    e1 = (tm.R1 + tm.R2) / (tm.R3 + tm.R4) if tm.at1 is None else tm.at1
    if t_pole is None:
        return _segment(e0, e1)
    e_inf = tm.R1 / tm.R3
    try:
        circ = circle_through_three_points(e0, e1, e_inf)
    except DegenerateInputError:
        return _segment(e0, e1, excluded=e_inf)
    if circ.degenerate:
        # collinear images: the bounded image of [0, 1] is the straight segment
        return _segment(e0, e1, excluded=e_inf)
    K, r = circ.center, circ.radius
    a0 = cmath.phase(e0 - K)
    a1 = cmath.phase(e1 - K)
    ainf = cmath.phase(e_inf - K)
    ccw = _wrap(a1 - a0)
    sweep = ccw if _wrap(ainf - a0) > ccw else ccw - 2.0 * math.pi
    far = abs(K) + r
    if abs(K) > 0 and _on_sweep(a0, sweep, cmath.phase(K), 0.0):
        mod = far
    else:
        mod = max(abs(e0), abs(e1))
        if abs(K) == 0:
            mod = r
    return Arc(e0=e0, e1=e1, kind="circle", max_modulus=mod, carrier=circ,
               excluded=e_inf, start=a0, sweep=sweep)


def arc_max_modulus(spec: OperatorSpec, z: complex) -> float:
    tm = t_mobius(spec, z)
    if tm.constant_in_t:
        return abs(tm(0.5))
    return arc_of_t(tm).max_modulus


def selfmap_certificate_exact(spec: OperatorSpec, zgrid=None) -> Certificate:
    """Pass iff every arc gamma([0, 1], z) stays in |w| <= 1 + 1e-12.

    Witness margins are (1 + 1e-12) - max_modulus.
    """
    z = polar_grid() if zgrid is None else np.asarray(zgrid, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("empty grid")
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("grid points must lie in the open unit disc")
    margins = np.empty(z.size)
    notes = np.empty(z.size, dtype=object)
    with np.errstate(divide="ignore", invalid="ignore"):
        R, scale, e0, e1 = _coeff_arrays(spec, z)
    for i in range(z.size):
        if not np.isfinite(scale[i]) or scale[i] == 0:
            margins[i], notes[i] = -math.inf, "gamma undefined"
            continue
        tm = TMobius(*(complex(v) for v in R[:, i] / scale[i]), at0=complex(e0[i]), at1=complex(e1[i]))
        if tm.constant_in_t:
            m = abs(tm(0.5))
        else:
            m = arc_of_t(tm).max_modulus
        margins[i] = 1.0 + DISC_TOL - m
        notes[i] = f"max_modulus={m:.6g}"
    return build_certificate("self-map-arc", margins, zs=z, notes=notes,
                             grid={"z_points": int(z.size)})
