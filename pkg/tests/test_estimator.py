import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from wco_kit import IntegralOperator
from wco_kit.exceptions import ConditionError, DimensionError, DomainError
from wco_kit.matrices import M2Params, truncate
from wco_kit.operator import preset


def test_params_and_clone():
    est = IntegralOperator(operator="hilbert", n_coeffs=8, alpha=0.5)
    params = est.get_params()
    assert params["operator"] == "hilbert" and params["n_coeffs"] == 8
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    est.set_params(alpha=1.5)
    assert est.alpha == 1.5


def test_fit_transform_cesaro():
    est = IntegralOperator(n_coeffs=6).fit()
    assert np.allclose(est.matrix_, truncate(M2Params(-1, 1, 0, 1), 6))
    out = est.transform([[1, 0, 0]])
    assert out.shape == (1, 6) and np.allclose(out[0], 1 / np.arange(1, 7))
    assert est.n_features_in_ == 6 and est.section_norm_ > 1


def test_predict_matches_closed_form():
    est = IntegralOperator(points=[0.5, -0.3j]).fit()
    pred = est.predict([[1.0, 0], [0, 1]])
    z = np.array([0.5, -0.3j])
    assert pred.shape == (2, 2)
    assert np.allclose(pred[0], -np.log(1 - z) / z, atol=1e-12)
    assert pred[0, 0] == pytest.approx(1.3862943611198906, abs=1e-12)


def test_transform_matches_predict_for_polynomials():
    est = IntegralOperator(operator="hilbert", n_coeffs=12, points=[0.2, 0.1 + 0.3j]).fit()
    X = np.zeros((1, 12))
    X[0, :4] = [1, -2, 0.5, 3]
    coeffs = est.transform(X)[0]
    z = np.array(est.points)
    approx = np.polyval(coeffs[::-1], z)
    # truncation after 12 terms leaves |z|^12-sized tails
    assert np.allclose(approx, est.predict(X)[0], atol=1e-6)


def test_spec_objects_and_dicts():
    spec = preset("j")
    a = IntegralOperator(operator=spec, n_coeffs=4, method="quadrature").fit()
    b = IntegralOperator(operator=spec.to_json(), n_coeffs=4, method="quadrature").fit()
    assert np.allclose(a.matrix_, b.matrix_)
    with pytest.raises(TypeError):
        IntegralOperator(operator=3).fit()


def test_fit_rejects_failing_operator(modified_cesaro):
    with pytest.raises(ConditionError):
        IntegralOperator(operator=modified_cesaro, n_coeffs=4).fit()


def test_validation_errors():
    with pytest.raises(DomainError):
        IntegralOperator(alpha=2.5).fit()
    with pytest.raises(NotFittedError):
        IntegralOperator().transform([[1]])
    est = IntegralOperator(n_coeffs=3).fit()
    with pytest.raises(DimensionError):
        est.transform([[0, 0, 0, 1]])
    with pytest.raises(DomainError):
        IntegralOperator(points=[1.2]).fit().predict([[1]])


def test_norm_and_pipeline():
    est = IntegralOperator(n_coeffs=4, alpha=1.0)
    assert np.allclose(est.norm([[0, 1, 0], [3, 0, 4]]), [1, 5])
    pipe = make_pipeline(IntegralOperator(n_coeffs=5), IntegralOperator(n_coeffs=5))
    out = pipe.fit_transform(np.eye(5)[:1])
    C = truncate(M2Params(-1, 1, 0, 1), 5)
    assert np.allclose(out[0], (C @ C)[:, 0])
