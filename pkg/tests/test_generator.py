import json

import numpy as np
import pytest

from wco_kit.exceptions import SpecError, ZeroOmegaError
from wco_kit.funcmaps import ExpMap, Polynomial, RationalMap
from wco_kit.generator import (TABLE6, GeneratorInput, derive_q, evaluate_q, generated_kernel,
                               generated_spec, generator_preset, identity_margins, table6_input,
                               verify_generated)
from wco_kit.grids import polar_grid
from wco_kit.operator import kernel, well_defined_certificate

CASES = sorted(TABLE6)

def _ring(rng, n, rmin=0.1, rmax=0.95):
    r = rmin + (rmax - rmin) * rng.random(n)
    return r * np.exp(2j * np.pi * rng.random(n))

def test_derive_q_case1():
    q = derive_q(table6_input(1))
    assert q.equals(RationalMap.from_coeffs([3.0, 0.0, 1 / 3]), 1e-14)

def test_derive_q_case3():
    q = derive_q(table6_input(3))
    p = Polynomial([1, -1, 1, 1])
    # [S_z] (1 - z/3)^2 / (4z/3) = (3 - z)^2 / 12
    expected = Polynomial([9, -6, 1]) * p * (1 / 12)
    assert q.equals(RationalMap(expected), 1e-13)

def test_derive_q_case5_pointwise(rng):
    gin = table6_input(5)
    q = derive_q(gin)
    z = _ring(rng, 40)
    om = (z - 0.5) / (3 * (z / 2 - 1))
    ref = (z * (1 - om) ** 2 / (4 * om)) * z
    assert np.allclose(q(z), ref, rtol=1e-12, atol=0)

def test_printed_q_uses_one_minus_omega_squared():
    # the printed case-1 value 3 + 2z - z^2/3 is what (1 - omega^2) in place of (1 - omega)^2 gives
    z = np.array([0.3, -0.2 + 0.5j])
    om = z / 3
    alt = (2 * (1 - om ** 2) / (4 * om) + 1) * 2 * z
    assert np.allclose(alt, 3 + 2 * z - z ** 2 / 3)
    assert not np.allclose(derive_q(table6_input(1))(z), alt)

def test_derive_q_exp_case(rng):
    gin = table6_input(2)
    q = derive_q(gin)
    assert isinstance(q, ExpMap)
    z = _ring(rng, 20)
    assert np.allclose(q(z), evaluate_q(gin, z), rtol=1e-13)

@pytest.mark.parametrize("case", CASES)
def test_derived_q_matches_pointwise_formula(case, rng):
    gin = table6_input(case)
    z = _ring(rng, 30, 0.2, 0.9)
    assert np.allclose(derive_q(gin)(z), evaluate_q(gin, z), rtol=1e-11, atol=1e-12)

def test_zero_omega():
    with pytest.raises(ZeroOmegaError):
        GeneratorInput(-1.0, 1.0, [0, 2], 0.0)
    with pytest.raises(ZeroOmegaError):
        evaluate_q(table6_input(1), 0.0)
    with pytest.raises(ZeroOmegaError):
        generated_kernel(table6_input(1), 0.5, 0.0)

def test_tampered_omega_rejected(fixtures_dir):
    obj = json.loads((fixtures_dir / "tampered_omega.json").read_text())
    with pytest.raises(SpecError):
        GeneratorInput.from_json(obj)

def test_nonmobius_omega_boundary_sampling():
    GeneratorInput(0.0, [0, 1], [0, 1], [0, 0.5, 0.4])
    with pytest.raises(SpecError):
        GeneratorInput(0.0, [0, 1], [0, 1], [0, 0.7, 0.4])

def test_json_round_trip(fixtures_dir):
    gin = GeneratorInput.from_json(json.loads((fixtures_dir / "table6_case1.json").read_text()))
    back = GeneratorInput.from_json(gin.to_json())
    assert back.omega.equals(gin.omega) and back.p.equals(gin.p)
    assert GeneratorInput.from_json(table6_input(2).to_json()).p(0.5) == pytest.approx(np.exp(0.5))

def test_preset_names():
    assert generator_preset("table6-case4").name == "table6-case4"
    with pytest.raises(KeyError):
        generator_preset("table6-case9")
    with pytest.raises(KeyError):
        generator_preset("cesaro")

def test_generated_kernel_case1_and_case6(rng):
    t, z = rng.random(40), _ring(rng, 40)
    g1 = (-(3 + z) ** 2 + 2 * t * (9 + z ** 2)) / (9 + (6 - 12 * t) * z + z ** 2)
    assert np.allclose(generated_kernel(table6_input(1), t, z).gamma, g1, atol=1e-12, rtol=0)
    g6 = -t * (-4 + z) ** 2 * (-1 + 2 * z) / ((-2 + z) * (-16 - 8 * z + 16 * t * z - z ** 2))
    assert np.allclose(generated_kernel(table6_input(6), t, z).gamma, g6, atol=1e-12, rtol=0)

@pytest.mark.parametrize("case", CASES)
def test_generated_kernel_agrees_with_operator_kernel(case, rng):
    gin = table6_input(case)
    spec = generated_spec(gin)
    t, z = 0.05 + 0.9 * rng.random(50), _ring(rng, 50, 0.15, 0.9)
    a, b = generated_kernel(gin, t, z, spec), kernel(spec, t, z)
    assert np.allclose(a.gamma, b.gamma, atol=1e-11, rtol=0)
    assert np.allclose(a.gamma_dt, b.gamma_dt, rtol=1e-9, atol=1e-11)
    assert np.allclose(a.gamma_dz, b.gamma_dz, rtol=1e-9, atol=1e-11)

@pytest.mark.parametrize("case", CASES)
def test_generated_endpoints(case, rng):
    gin = table6_input(case)
    z = _ring(rng, 50)
    assert np.allclose(generated_kernel(gin, 0.0, z).gamma, gin.phi1(z), atol=1e-13, rtol=0)
    assert np.allclose(generated_kernel(gin, 1.0, z).gamma, gin.phi2(z), atol=1e-13, rtol=0)

def test_gamma_independent_of_p(rng):
    base = table6_input(3)
    other = GeneratorInput(base.phi1, base.phi2, RationalMap.from_coeffs([2, 0.5]), base.omega)
    t, z = rng.random(50), _ring(rng, 50)
    assert np.allclose(generated_kernel(base, t, z).gamma, generated_kernel(other, t, z).gamma,
                       atol=1e-12, rtol=0)

@pytest.mark.parametrize("case", CASES)
def test_identity_and_verification(case):
    gin = table6_input(case)
    margins, re_rhs = identity_margins(gin, polar_grid(21, 21))
    assert np.all(margins > 0) and np.all(re_rhs > 0)
    cert = verify_generated(gin)
    assert cert.passed and cert.kind == "generated"

@pytest.mark.parametrize("case", CASES)
def test_derived_spec_is_well_defined(case):
    assert well_defined_certificate(generated_spec(table6_input(case)), polar_grid(21, 21)).passed
