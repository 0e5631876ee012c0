"""Polynomial, rational and Moebius maps on the complex plane, plus circle geometry.

Polynomials store real coefficients in ascending degree, so ``coeffs[k]``
multiplies ``z**k``.  All map types are immutable and evaluate elementwise on
numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as P

from .exceptions import DegenerateInputError, PoleError, PoleOnDiscError, ShapeError

TRIM_RTOL = 1e-14
CANCEL_TOL = 1e-12
POLE_RTOL = 1e-14


class Jet:
    """First-order jet ``value + eps * d`` for propagating z-derivatives."""

    __slots__ = ("value", "d")

    def __init__(self, value, d=0.0):
        self.value = value
        self.d = d

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.value + other.value, self.d + other.d)
        return Jet(self.value + other, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.value, -self.d)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.value * other.value, self.d * other.value + self.value * other.d)
        return Jet(self.value * other, self.d * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            v = self.value / other.value
            return Jet(v, (self.d - v * other.d) / other.value)
        return Jet(self.value / other, self.d / other)

    def __repr__(self):
        return f"Jet({self.value!r}, {self.d!r})"


def _trim(c) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if c.size == 0:
        return np.zeros(0)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(0)
    keep = np.nonzero(np.abs(c) > TRIM_RTOL * scale)[0]
    return c[: keep[-1] + 1].copy()


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Real polynomial with ascending coefficients; trailing negligible terms are trimmed."""

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        c = _trim(self.coeffs)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, c: float) -> "Polynomial":
        return cls([c])

    @classmethod
    def identity(cls) -> "Polynomial":
        return cls([0.0, 1.0])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coeff(self, k: int) -> float:
        return float(self.coeffs[k]) if 0 <= k < len(self.coeffs) else 0.0

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        m = min(n, len(self.coeffs))
        out[:m] = self.coeffs[:m]
        return out

    def __call__(self, z):
        return poly_eval(self, z)

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) <= 1:
            return Polynomial()
        return Polynomial(P.polyder(self.coeffs))

    def roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return np.asarray(P.polyroots(self.coeffs), dtype=complex)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.padded(n) + other.padded(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Polynomial()
        return Polynomial(P.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def compose_affine(self, a: float, b: float) -> "Polynomial":
        """Return the polynomial ``z -> self(a*z + b)``."""
        out = Polynomial()
        lin = Polynomial([b, a])
        for c in self.coeffs[::-1]:
            out = out * lin + c
        return out

    def equals(self, other, tol: float = 0.0) -> bool:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return bool(np.all(np.abs(self.padded(n) - other.padded(n)) <= tol))

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if np.isscalar(x):
        if np.iscomplexobj(x):
            raise TypeError("polynomial coefficients must be real")
        return Polynomial([float(x)])
    return Polynomial(x)


def poly_eval(p: Polynomial, z):
    """Horner evaluation of ``sum(coeffs[k] * z**k)``; elementwise on arrays."""
    z = np.asarray(z)
    acc = np.zeros(z.shape, dtype=complex if np.iscomplexobj(z) else float)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def _divide_out(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial, bool]:
    """Cancel one common root (or conjugate pair) of num and den, if any."""
    if num.degree < 1 or den.degree < 1:
        return num, den, False
    for r in den.roots():
        n_scale = poly_eval(Polynomial(np.abs(num.coeffs)), abs(r))
        hit = abs(poly_eval(num, r)) <= CANCEL_TOL * max(n_scale, 1e-300)
        if not hit:
            nr = num.roots()
            hit = nr.size > 0 and np.min(np.abs(nr - r)) <= CANCEL_TOL * max(1.0, abs(r))
        if not hit:
            continue
        if abs(r.imag) > CANCEL_TOL * max(1.0, abs(r)):
            factor = np.array([abs(r) ** 2, -2.0 * r.real, 1.0])
        else:
            factor = np.array([-r.real, 1.0])
        qn, _ = P.polydiv(num.coeffs, factor)
        qd, _ = P.polydiv(den.coeffs, factor)
        return Polynomial(qn), Polynomial(qd), True
    return num, den, False


@dataclass(frozen=True, eq=False)
class RationalMap:
    """Ratio ``num/den`` of real polynomials, normalized at construction.

    Common roots (within 1e-12) are cancelled and the denominator is scaled
    to be monic, so two equal maps have equal coefficient arrays.
    """

    num: Polynomial
    den: Polynomial = field(default_factory=lambda: Polynomial([1.0]))

    def __post_init__(self):
        num, den = _as_poly(self.num), _as_poly(self.den)
        if den.is_zero:
            raise ShapeError("rational map with zero denominator")
        if num.is_zero:
            num, den = Polynomial(), Polynomial([1.0])
        else:
            changed = True
            while changed:
                num, den, changed = _divide_out(num, den)
        lead = den.coeffs[-1]
        with np.errstate(over="ignore"):
            nc = num.coeffs / lead
        if not np.all(np.isfinite(nc)):
            raise ShapeError("denominator is too small to normalise")
        object.__setattr__(self, "num", Polynomial(nc))
        object.__setattr__(self, "den", Polynomial(den.coeffs / lead))

    @classmethod
    def from_coeffs(cls, num, den=(1.0,)) -> "RationalMap":
        return cls(Polynomial(num), Polynomial(den))

    @classmethod
    def constant(cls, c: float) -> "RationalMap":
        return cls(Polynomial([c]))

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls(Polynomial([0.0, 1.0]))

    @classmethod
    def mobius(cls, a: float, b: float, c: float, d: float) -> "RationalMap":
        """The map ``(a z + b) / (c z + d)``."""
        return cls(Polynomial([b, a]), Polynomial([d, c]))

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    @property
    def is_mobius(self) -> bool:
        return self.num.degree <= 1 and self.den.degree <= 1

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial:
            raise ShapeError("map is not a polynomial")
        return Polynomial(self.num.coeffs / self.den.coeffs[0])

    def poles(self) -> np.ndarray:
        return self.den.roots()

    def __call__(self, z):
        return rational_eval(self, z)

    def value(self, z):
        return rational_eval(self, z)

    def derivative(self, z):
        return rational_derivative(self, z)

    def jet(self, z):
        """Numerator and denominator jets at z (no division performed)."""
        return (Jet(poly_eval(self.num, z), poly_eval(self.num.derivative(), z)),
                Jet(poly_eval(self.den, z), poly_eval(self.den.derivative(), z)))

    def _coerce(self, other) -> "RationalMap":
        if isinstance(other, RationalMap):
            return other
        if isinstance(other, Polynomial):
            return RationalMap(other)
        return RationalMap.constant(float(other))

    def __add__(self, other):
        if isinstance(other, ExpMap):
            return NotImplemented
        o = self._coerce(other)
        return RationalMap(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalMap(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, ExpMap):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, ExpMap):
            return other * self
        o = self._coerce(other)
        return RationalMap(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero:
            raise ZeroDivisionError("division by the zero map")
        return RationalMap(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def equals(self, other: "RationalMap", tol: float = 1e-12) -> bool:
        return self.num.equals(other.num, tol) and self.den.equals(other.den, tol)

    def to_json(self) -> dict:
        return {"num": self.num.coeffs.tolist() or [0.0], "den": self.den.coeffs.tolist()}

    def __repr__(self):
        return f"RationalMap(num={self.num.coeffs.tolist()}, den={self.den.coeffs.tolist()})"


@dataclass(frozen=True, eq=False)
class ExpMap:
    """The transcendental builtin ``z -> scale(z) * exp(z)`` with a rational pre-factor."""

    scale: RationalMap = field(default_factory=lambda: RationalMap.constant(1.0))

    def __call__(self, z):
        return self.value(z)

    def value(self, z):
        return rational_eval(self.scale, z) * np.exp(z)

    def derivative(self, z):
        return (rational_derivative(self.scale, z) + rational_eval(self.scale, z)) * np.exp(z)

    def jet(self, z):
        e = np.exp(z)
        sn, sd = self.scale.jet(z)
        return Jet(sn.value * e, (sn.d + sn.value) * e), sd

    def __mul__(self, other):
        if isinstance(other, ExpMap):
            raise TypeError("products of exp builtins are not representable")
        return ExpMap(self.scale * other)

    __rmul__ = __mul__

    def __neg__(self):
        return ExpMap(-self.scale)

    def to_json(self) -> dict:
        return {"builtin": "exp", "scale": self.scale.to_json()}

    def __repr__(self):
        return f"ExpMap(scale={self.scale!r})"


AnalyticMap = Union[RationalMap, ExpMap]


def as_map(x) -> AnalyticMap:
    """Coerce numbers, coefficient lists, polynomials and JSON dicts to a map."""
    if isinstance(x, (RationalMap, ExpMap)):
        return x
    if isinstance(x, Polynomial):
        return RationalMap(x)
    if isinstance(x, dict):
        return map_from_json(x)
    if np.isscalar(x):
        return RationalMap.constant(float(x))
    return RationalMap(Polynomial(x))


def map_from_json(obj: dict) -> AnalyticMap:
    if "builtin" in obj:
        if obj["builtin"] != "exp":
            raise ValueError(f"unknown builtin {obj['builtin']!r}")
        scale = obj.get("scale")
        return ExpMap(map_from_json(scale) if scale is not None else RationalMap.constant(1.0))
    try:
        return RationalMap(Polynomial(obj["num"]), Polynomial(obj.get("den", [1.0])))
    except KeyError as exc:
        raise ValueError(f"rational map JSON needs 'num': {obj!r}") from exc


def _pole_check(n, d):
    bad = np.abs(d) < POLE_RTOL * np.maximum(1.0, np.abs(n))
    if np.any(bad):
        raise PoleError("evaluation at a pole of a rational map")


def rational_eval(R: RationalMap, z):
    n, d = poly_eval(R.num, z), poly_eval(R.den, z)
    _pole_check(n, d)
    return n / d


def rational_derivative(R: RationalMap, z):
    n, d = poly_eval(R.num, z), poly_eval(R.den, z)
    _pole_check(n, d)
    dn, dd = poly_eval(R.num.derivative(), z), poly_eval(R.den.derivative(), z)
    return (dn * d - n * dd) / (d * d)


@dataclass(frozen=True)
class Circle:
    """A circle, or (``degenerate=True``) the line through ``through[0]`` and ``through[1]``."""

    center: complex
    radius: float
    degenerate: bool = False
    through: tuple = ()

    def __post_init__(self):
        if not self.degenerate and self.radius < 0:
            raise ValueError("negative radius")


def _det3(rows) -> complex:
    return complex(np.linalg.det(np.asarray(rows, dtype=complex)))


def circle_through_three_points(w1: complex, w2: complex, w3: complex) -> Circle:
    """Circle through three points via the determinants ``a``, ``d``, ``f``.

    With rows ``(w, Im w, 1)`` the determinant ``a`` is real (the imaginary
    part of the first column duplicates the second), ``K = d / (2a)`` and
    ``r**2 = |K|**2 - f/a``.  Collinear points return a degenerate line.
    """
    pts = [complex(w1), complex(w2), complex(w3)]
    span = max(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:])
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(pts[i] - pts[j]) <= 1e-14 * max(1.0, abs(pts[i])):
                raise DegenerateInputError("two of the three points coincide")
    a = _det3([[w, w.imag, 1.0] for w in pts]).real
    if abs(a) <= 1e-13 * span * span:
        return Circle(center=complex(np.nan, np.nan), radius=float("inf"), degenerate=True,
                      through=(pts[0], pts[1] if abs(pts[1] - pts[0]) > 0 else pts[2]))
    d = _det3([[abs(w) ** 2, -1j * w, 1.0] for w in pts])
    f = -_det3([[abs(w) ** 2, w.real, w.imag] for w in pts]).real
    center = d / (2.0 * a)
    r2 = abs(center) ** 2 - f / a
    return Circle(center=center, radius=float(np.sqrt(max(r2, 0.0))))


def mobius_image_of_unit_disc(M: RationalMap) -> Circle:
    """Boundary circle of ``M(D)`` for a Moebius map with no pole on the closed disc.

    Constant maps return a zero-radius circle at their value.
    """
    if not M.is_mobius:
        raise ShapeError("expected a map of degree <= 1 over degree <= 1")
    poles = M.poles()
    if poles.size and np.min(np.abs(poles)) <= 1.0 + 1e-12:
        raise PoleOnDiscError("Moebius map has a pole on the closed unit disc")
    a, b = M.num.coeff(1), M.num.coeff(0)
    c, d = M.den.coeff(1), M.den.coeff(0)
    if abs(a * d - b * c) <= 1e-15 * max(abs(a * d), abs(b * c), 1e-300):
        return Circle(center=complex(M(0.0)), radius=0.0)
    return circle_through_three_points(M(1.0), M(-1.0), M(1j))
