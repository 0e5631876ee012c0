import math

import numpy as np
import pytest

from wco_kit.exceptions import NonConvergenceError
from wco_kit.quadrature import (DOUBLE_EXPONENTIAL, QuadratureConfig, composite_rule, gauss_legendre,
                                integrate, integrate_gl, integrate_tanh_sinh)


def test_gauss_legendre_exact_for_polynomials():
    x, w = gauss_legendre(8)
    assert np.sum(w) == pytest.approx(1.0, abs=1e-15)
    for k in range(16):
        assert np.sum(w * x ** k) == pytest.approx(1.0 / (k + 1), abs=1e-14)


def test_composite_rule_covers_interval():
    t, w = composite_rule(-1.0, 3.0, 5, 4)
    assert t.size == 20 and np.sum(w) == pytest.approx(4.0)
    assert t.min() > -1.0 and t.max() < 3.0


def test_integrate_smooth():
    res = integrate(np.exp, 0.0, 1.0)
    assert res.value == pytest.approx(math.e - 1.0, abs=1e-13)


def test_integrate_vector_valued():
    z = np.array([0.1, 0.5, -0.3j])
    res = integrate(lambda t: 1.0 / (1.0 - t[:, None] * z[None, :]), 0.0, 1.0)
    assert np.allclose(res.value, -np.log(1 - z) / z, atol=1e-12)


def test_tanh_sinh_endpoint_singularity():
    cfg = QuadratureConfig(tol=1e-12, endpoint_mode=DOUBLE_EXPONENTIAL)
    res = integrate(lambda t: t ** -0.5, 0.0, 1.0, cfg)
    assert res.value == pytest.approx(2.0, abs=1e-10)
    # both ends singular: fold the right half onto the left end, where nodes are exact
    res = integrate_tanh_sinh(lambda u: (u * (1 - u)) ** -0.5, 0.0, 0.5, cfg)
    assert 2 * res.value == pytest.approx(math.pi, abs=1e-10)


def test_gl_nonconvergence_raises():
    with pytest.raises(NonConvergenceError):
        integrate_gl(lambda t: np.sin(1e6 * t) * t ** -0.9, 0.0, 1.0,
                     QuadratureConfig(nodes=4, max_refinements=3))


@pytest.mark.parametrize("kwargs", [{"nodes": 1}, {"tol": 0.0}, {"max_refinements": 0},
                                    {"endpoint_mode": "magic"}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureConfig(**kwargs)
