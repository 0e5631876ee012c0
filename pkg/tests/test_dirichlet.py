import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wco_kit.dirichlet import AnalyticSeries, coeffs_from_samples, dirichlet_norm, growth_majorant
from wco_kit.exceptions import ConditioningWarning, DomainError
from wco_kit.operator import apply_direct, preset

alphas = st.sampled_from([0.1, 0.5, 1.0, 1.5, 1.9])
coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def test_norm_of_z_is_one():
    for a in (0.3, 1.0, 1.7):
        assert dirichlet_norm(AnalyticSeries([0, 1]), a) == 1.0


def test_norm_hardy_case():
    assert dirichlet_norm(AnalyticSeries([0, 0, 1]), 1.0) == pytest.approx(1.0)


def test_norm_classical_dirichlet_limit():
    # alpha = 0 sits outside the admitted range; the weight n^{1-alpha} tends to n
    with pytest.raises(DomainError):
        dirichlet_norm(AnalyticSeries([0, 0, 1]), 0.0)
    assert dirichlet_norm(AnalyticSeries([0, 0, 1]), 1e-12) == pytest.approx(math.sqrt(2), rel=1e-10)


@pytest.mark.parametrize("alpha", [-0.1, 2.0, 2.5])
def test_norm_domain(alpha):
    with pytest.raises(DomainError):
        dirichlet_norm(AnalyticSeries([1]), alpha)


def test_majorant_examples():
    assert growth_majorant(0.7, 0.0) == 1.0
    assert growth_majorant(1.0, 0.5) == pytest.approx(math.sqrt(4 / 3), abs=1e-14)
    with pytest.raises(DomainError):
        growth_majorant(1.0, 1.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_majorant_growth_rate(alpha):
    vals = [growth_majorant(alpha, r) * (1 - r) ** (alpha / 2) for r in (0.9, 0.99, 0.999)]
    assert max(vals) < 3.0
    assert vals[2] <= vals[1] * 1.5


def test_extraction_polynomial():
    f = coeffs_from_samples(lambda z: z ** 2, r=0.5, N=4, M=16)
    assert np.allclose(f.coeffs, [0, 0, 1, 0, 0], atol=1e-12)


def test_extraction_geometric():
    f = coeffs_from_samples(lambda z: 1 / (1 - z), r=0.5, N=10, M=512)
    assert np.allclose(f.coeffs, 1.0, atol=1e-9)


def test_extraction_cesaro_of_one():
    spec = preset("cesaro")
    f = coeffs_from_samples(lambda z: apply_direct(spec, [1.0], z), r=0.6, N=20, M=256)
    assert np.allclose(f.coeffs, 1.0 / np.arange(1, 22), atol=1e-8)


def test_extraction_conditioning_warning():
    with pytest.warns(ConditioningWarning):
        coeffs_from_samples(lambda z: z, r=0.1, N=16, M=64)


def test_extraction_rejects_bad_sample_count():
    with pytest.raises(ValueError):
        coeffs_from_samples(lambda z: z, r=0.5, N=8, M=24)


def test_series_json_round_trip():
    f = AnalyticSeries([1, 2j, -0.5])
    assert np.array_equal(AnalyticSeries.from_json(f.to_json()).coeffs, f.coeffs)


@given(st.lists(coeff, min_size=1, max_size=12), st.lists(coeff, min_size=1, max_size=12), coeff, alphas)
def test_norm_homogeneity_and_triangle(a, b, c, alpha):
    f, g = AnalyticSeries(a), AnalyticSeries(b)
    nf, ng = dirichlet_norm(f, alpha), dirichlet_norm(g, alpha)
    assert dirichlet_norm(c * f, alpha) == pytest.approx(abs(c) * nf, rel=1e-12, abs=1e-12)
    assert dirichlet_norm(f + g, alpha) <= nf + ng + 1e-12 * (1 + nf + ng)


@given(st.lists(coeff, min_size=1, max_size=12), st.complex_numbers(max_magnitude=0.999), alphas)
def test_growth_invariant(a, z, alpha):
    f = AnalyticSeries(a)
    bound = growth_majorant(alpha, abs(z)) * dirichlet_norm(f, alpha)
    assert abs(f(z)) <= bound * (1 + 1e-12) + 1e-12


@given(st.lists(coeff, min_size=2, max_size=12), st.floats(0.05, 1.9), st.floats(0.05, 1.9))
def test_norm_monotone_in_alpha(a, x, y):
    f = AnalyticSeries([0] + a[1:])
    lo, hi = min(x, y), max(x, y)
    assert dirichlet_norm(f, hi) <= dirichlet_norm(f, lo) * (1 + 1e-12)


@settings(max_examples=200)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=10))
def test_extraction_round_trip(a):
    f = AnalyticSeries(a)
    g = coeffs_from_samples(f, r=0.9, N=len(a) - 1, M=64)
    assert np.allclose(g.coeffs, f.coeffs, atol=1e-12 * max(1.0, np.max(np.abs(a))))
