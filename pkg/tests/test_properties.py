"""Operator-level invariants over presets and generated specs (10^3 examples each)."""
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from wco_kit.bounds import lf_data
from wco_kit.dirichlet import AnalyticSeries
from wco_kit.generator import TABLE6, generated_kernel, generated_spec, table6_input
from wco_kit.operator import PRESETS, OperatorSpec, apply_direct, kernel, preset

NAMES = sorted(PRESETS)
CASES = sorted(TABLE6)

unit_t = st.floats(0.0, 1.0)
open_t = st.floats(1e-6, 1 - 1e-6)
radius = st.floats(0.0, 0.95)
angle = st.floats(0.0, 2 * np.pi)


SPECS = {c: (table6_input(c), generated_spec(table6_input(c))) for c in CASES}


def _z(r, th):
    return r * np.exp(1j * th)


def _regular(gin, z):
    # omega = 0 or a collapsed segment (phi1 = phi2, where q vanishes too) are
    # isolated points where the formulas are 0/0; the library raises there
    return abs(gin.omega(z)) > 1e-6 and abs(gin.phi2(z) - gin.phi1(z)) > 1e-6


@pytest.mark.parametrize("name", NAMES)
@given(r=radius, th=angle)
def test_endpoints_presets(name, r, th):
    spec, z = preset(name), _z(r, th)
    assert abs(kernel(spec, 0.0, z, derivatives=False).gamma - spec.phi1(z)) <= 1e-13
    assert abs(kernel(spec, 1.0, z, derivatives=False).gamma - spec.phi2(z)) <= 1e-13


@pytest.mark.parametrize("case", CASES)
@given(r=st.floats(0.05, 0.95), th=angle)
def test_endpoints_generated(case, r, th):
    (gin, spec), z = SPECS[case], _z(r, th)
    assume(_regular(gin, z))
    scale = max(1.0, abs(gin.phi1(z)), abs(gin.phi2(z)))
    assert abs(generated_kernel(gin, 0.0, z, spec).gamma - gin.phi1(z)) <= 1e-13 * scale
    assert abs(generated_kernel(gin, 1.0, z, spec).gamma - gin.phi2(z)) <= 1e-13 * scale


@pytest.mark.parametrize("name", NAMES)
@given(t=unit_t, r=radius, th=angle)
def test_kernel_conjugation_symmetry(name, t, r, th):
    spec, z = preset(name), _z(r, th)
    g = kernel(spec, t, z, derivatives=False).gamma
    gc = kernel(spec, t, np.conj(z), derivatives=False).gamma
    assert abs(gc - np.conj(g)) <= 1e-14 * max(1.0, abs(g))


@pytest.mark.parametrize("case", CASES)
@given(t=unit_t, r=st.floats(0.05, 0.95), th=angle)
def test_generated_conjugation_symmetry(case, t, r, th):
    (gin, spec), z = SPECS[case], _z(r, th)
    assume(_regular(gin, z))
    g = generated_kernel(gin, t, z, spec).gamma
    gc = generated_kernel(gin, t, np.conj(z), spec).gamma
    assert abs(gc - np.conj(g)) <= 1e-13 * max(1.0, abs(g))


@pytest.mark.parametrize("name", NAMES)
@given(t=open_t, r=radius, th=angle)
def test_kernel_stays_in_closed_disc(name, t, r, th):
    assert abs(kernel(preset(name), t, _z(r, th), derivatives=False).gamma) <= 1 + 1e-12


@pytest.mark.parametrize("name", NAMES)
@given(t=open_t, r=radius, th=angle)
def test_lf_data_reproduces_kernel(name, t, r, th):
    spec, z = preset(name), _z(r, th)
    g = kernel(spec, t, z, derivatives=False).gamma
    assert abs(lf_data(spec).gamma(t, z) - g) <= 1e-12 * max(1.0, abs(g))


@pytest.mark.parametrize("name", NAMES)
@given(c=st.floats(0.1, 10.0) | st.floats(-10.0, -0.1), t=unit_t, r=radius, th=angle)
def test_scaling_leaves_kernel_unchanged(name, c, t, r, th):
    base = preset(name)
    scaled = OperatorSpec(base.phi1, base.phi2, base.p * c, base.q * c)
    z = _z(r, th)
    a = kernel(base, t, z, derivatives=False).gamma
    b = kernel(scaled, t, z, derivatives=False).gamma
    assert abs(a - b) <= 1e-13 * max(1.0, abs(a))


@settings(max_examples=100)
@pytest.mark.parametrize("name", NAMES)
@given(coef=st.lists(st.floats(-2, 2), min_size=1, max_size=9), x=st.floats(-0.9, 0.9))
def test_real_data_real_output(name, coef, x):
    v = apply_direct(preset(name), AnalyticSeries(coef), x)
    assert abs(np.imag(v)) <= 1e-13 * max(1.0, abs(v))


@pytest.mark.parametrize("case", [1, 3, 4, 5, 6])
def test_generated_specs_have_real_data(case):
    spec = generated_spec(table6_input(case))
    for m in (spec.phi1, spec.phi2, spec.p, spec.q):
        assert np.isrealobj(m.num.coeffs) and np.isrealobj(m.den.coeffs)
