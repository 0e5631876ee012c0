import numpy as np
import pytest

from wco_kit.exceptions import DimensionError, DomainError
from wco_kit.validation import check_alpha, check_coefficients, check_points, check_t, parse_complex


def test_coefficients_shapes():
    assert check_coefficients([1, 2]).shape == (1, 2)
    X = check_coefficients([[1, 2], [3, 4]], n_features=4)
    assert X.shape == (2, 4) and X.dtype == complex and np.all(X[:, 2:] == 0)
    assert check_coefficients([[1, 2, 0]], n_features=2).shape == (1, 2)


def test_coefficients_errors():
    with pytest.raises(DimensionError):
        check_coefficients([[1, 2, 3]], n_features=2)
    with pytest.raises(DimensionError):
        check_coefficients(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        check_coefficients([np.nan])
    with pytest.raises(TypeError):
        check_coefficients(np.array([object()]))


def test_points():
    assert check_points(0.5).shape == (1,)
    with pytest.raises(DomainError):
        check_points([1.0])
    assert check_points([1.0], closed=True)[0] == 1.0
    with pytest.raises(ValueError):
        check_points([np.inf])


def test_alpha_and_t():
    assert check_alpha("1.5") == 1.5
    for bad in (0, 2, -1):
        with pytest.raises(DomainError):
            check_alpha(bad)
    assert np.array_equal(check_t([0, 1]), [0.0, 1.0])
    with pytest.raises(DomainError):
        check_t(1.5)


@pytest.mark.parametrize("text,value", [("0.5", 0.5), ("0.3+0.2i", 0.3 + 0.2j), ("0.3 - 0.2j", 0.3 - 0.2j),
                                        ("[0.1, -0.4]", 0.1 - 0.4j), ("i", 1j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_complex_rejects_garbage():
    with pytest.raises(ValueError):
        parse_complex("abc")
