import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wco_kit.dirichlet import AnalyticSeries, coeffs_from_samples
from wco_kit.exceptions import DimensionError, SpecError
from wco_kit.matrices import (M1Params, M2Params, apply_matrix, divided_power,
                              finite_section, m1_entry, m2_entry, matrix_family_for,
                              operator_coefficients, spectral_norm, truncate)
from wco_kit.operator import apply_direct, preset

HILBERT = M1Params(-1, 1, 0, 1)
REDUCED = M1Params(-1, 1, -1, 1)
CESARO = M2Params(-1, 1, 0, 1)


def test_m1_hilbert_entries():
    assert m1_entry(HILBERT, 1, 1) == pytest.approx(1 / 3, abs=1e-16)
    for n in range(8):
        for k in range(8):
            assert m1_entry(HILBERT, n, k) == pytest.approx(1 / (n + k + 1), abs=1e-15)


def test_m1_reduced_hilbert():
    assert m1_entry(REDUCED, 0, 0) == 1.0 and m1_entry(REDUCED, 0, 1) == 0.0
    for n in range(6):
        for k in range(6):
            m = n + k + 1
            assert m1_entry(REDUCED, n, k) == pytest.approx((1 - (-1) ** m) / (2 * m), abs=1e-15)


def test_m1_corner_from_formula():
    # (x2 - x1) / ((x2 - x1) * 1) / q0 with q0 = 2
    assert m1_entry(M1Params(1, 2, 0, 1), 0, 0) == pytest.approx(0.5, abs=1e-16)


def test_m2_entries():
    for k in range(3):
        assert m2_entry(CESARO, 2, k) == pytest.approx(1 / 3, abs=1e-16)
    assert m2_entry(M2Params(0.3, 1.2, -0.5, 0.7), 1, 4) == 0.0
    r = M2Params(-1, 1, -1, 1)
    for n in range(6):
        assert m2_entry(r, n, 0) == pytest.approx((1 - (-1) ** (n + 1)) / (2 * (n + 1)), abs=1e-15)


def test_standing_condition():
    with pytest.raises(SpecError):
        M1Params(2.0, 1.0, 0.0, 1.0)
    with pytest.raises(SpecError):
        M2Params(-1.0, 1.0, 0.5, 0.5)


def test_divided_power_stable_branch():
    a, b = 0.3, 0.3 + 1e-9
    assert divided_power(a, b, 5) == pytest.approx(a ** 4, rel=1e-8)
    assert divided_power(0.0, 1.0, 4) == pytest.approx(0.25)


def test_truncate_hilbert():
    H = truncate(HILBERT, 3)
    assert np.allclose(H, [[1, 1 / 2, 1 / 3], [1 / 2, 1 / 3, 1 / 4], [1 / 3, 1 / 4, 1 / 5]], atol=1e-16)


def test_cesaro_matrix_action():
    C = truncate(CESARO, 6)
    e0 = np.eye(6)[0]
    assert np.allclose(apply_matrix(C, e0), 1 / np.arange(1, 7))
    assert np.array_equal(apply_matrix(C, np.zeros(6)), np.zeros(6))


def test_dimension_errors():
    with pytest.raises(DimensionError):
        truncate(HILBERT, 0)
    with pytest.raises(DimensionError):
        apply_matrix(np.eye(3), np.ones(4))


def test_family_detection():
    assert matrix_family_for(preset("hilbert")) == HILBERT
    assert matrix_family_for(preset("reduced-hilbert")) == REDUCED
    assert matrix_family_for(preset("cesaro")) == CESARO
    assert matrix_family_for(preset("j")) is None


def test_finite_section_cesaro_and_hilbert():
    for name, fam in (("cesaro", CESARO), ("hilbert", HILBERT)):
        T = finite_section(preset(name), 1.0, 16)
        assert np.max(np.abs(T - truncate(fam, 16))) < 1e-8


def test_finite_section_adjoint_column0():
    T = finite_section(preset("adjoint-cesaro"), 1.0, 8)
    assert np.allclose(T[:, 0], np.eye(8)[0], atol=1e-10)


def test_finite_section_exact_matches_quadrature():
    spec = preset("reduced-hilbert")
    A = finite_section(spec, 0.5, 12, method="exact")
    B = finite_section(spec, 0.5, 12)
    assert np.max(np.abs(A - B)) < 1e-9
    with pytest.raises(SpecError):
        operator_coefficients(preset("j"), 4, method="exact")


@pytest.mark.parametrize("name", ["cesaro", "hilbert"])
def test_section_norms_monotone(name):
    vals = [spectral_norm(finite_section(preset(name), 1.0, N, method="auto")).value
            for N in (10, 20, 40, 80)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("name", ["cesaro", "hilbert"])
def test_quadrature_matrix_consistency(name, rng):
    spec = preset(name)
    fam = matrix_family_for(spec)
    M = truncate(fam, 11)
    for _ in range(3):
        a = rng.normal(size=11)
        g = coeffs_from_samples(lambda z: apply_direct(spec, AnalyticSeries(a), z), r=0.6, N=10, M=64)
        assert np.max(np.abs(g.coeffs - M @ a)) < 1e-8


def test_spectral_norm_identity_and_zero():
    est = spectral_norm(np.eye(5))
    assert est.value == pytest.approx(1.0) and est.converged
    assert spectral_norm(np.zeros((3, 3))).value == 0.0


def test_spectral_norm_matches_svd(rng):
    A = rng.normal(size=(30, 20))
    assert spectral_norm(A, tol=1e-14).value == pytest.approx(np.linalg.norm(A, 2), rel=1e-6)


def test_hankel_symmetry_for_p0_eq_minus_q0():
    T = truncate(M1Params(-0.7, 0.7, -0.4, 0.9), 12)
    assert np.allclose(T, T.T, rtol=1e-14, atol=0)


@settings(max_examples=200)
@given(st.floats(-1, 1), st.floats(0.2, 3), st.floats(-1, 1), st.floats(-1, 1))
def test_m2_lower_triangular(p0, q0, l1, l2):
    if l2 - l1 < 1e-3:
        return
    try:
        params = M2Params(p0, q0, l1, l2)
    except SpecError:
        return
    T = truncate(params, 8)
    assert np.all(np.triu(T, 1) == 0)
