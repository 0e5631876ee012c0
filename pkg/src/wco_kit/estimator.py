"""scikit-learn style wrapper: functions in, images under the operator out.

Rows of X are Taylor coefficient vectors a_0..a_{n-1}.  ``transform`` maps
them to the coefficients of I(f) through the N x N coefficient matrix, and
``predict`` evaluates I(f) at fixed points of the disc by quadrature.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dirichlet import AnalyticSeries, dirichlet_weights
from .exceptions import ConditionError
from .grids import interior_t_grid, polar_grid
from .matrices import operator_coefficients, spectral_norm
from .operator import OperatorSpec, apply_direct, preset, selfmap_condition_sampled, well_defined_certificate
from .quadrature import QuadratureConfig
from .validation import check_alpha, check_coefficients, check_points


def _resolve(operator) -> OperatorSpec:
    if isinstance(operator, OperatorSpec):
        return operator
    if isinstance(operator, str):
        return preset(operator)
    if isinstance(operator, dict):
        return OperatorSpec.from_json(operator)
    raise TypeError("operator must be a preset name, an OperatorSpec or its JSON dict")


class IntegralOperator(TransformerMixin, BaseEstimator):
    """The integral operator of a spec acting on truncated Taylor series.

    Parameters
    ----------
    operator : str, OperatorSpec or dict
        Preset name (``"cesaro"``, ``"hilbert"``, ...) or a full spec.
    n_coeffs : int
        Section size N; inputs must have degree < N.
    alpha : float
        Weight of the D_alpha norm used for ``section_norm_``.
    points : array-like of complex
        Evaluation points for ``predict``.
    method : {"auto", "quadrature"}
        How the coefficient matrix is built.
    check : bool
        Run the well-defined and sampled self-map certificates in ``fit``.
    quad_nodes, tol : quadrature settings for ``predict``.
    """

    def __init__(self, operator="cesaro", n_coeffs: int = 32, alpha: float = 1.0, points=(0.5,),
                 method: str = "auto", check: bool = True, quad_nodes: int = 64, tol: float = 1e-11):
        self.operator = operator
        self.n_coeffs = n_coeffs
        self.alpha = alpha
        self.points = points
        self.method = method
        self.check = check
        self.quad_nodes = quad_nodes
        self.tol = tol

    def fit(self, X=None, y=None):
        spec = _resolve(self.operator)
        alpha = check_alpha(self.alpha)
        if int(self.n_coeffs) < 1:
            raise ValueError("n_coeffs must be positive")
        self.certificates_ = []
        if self.check:
            grid = polar_grid(21, 32)
            self.certificates_ = [well_defined_certificate(spec, grid),
                                  selfmap_condition_sampled(spec, interior_t_grid(17), grid)]
            bad = [c.kind for c in self.certificates_ if not c.passed]
            if bad:
                raise ConditionError(f"operator fails {', '.join(bad)}")
        self.spec_ = spec
        self.matrix_ = operator_coefficients(spec, int(self.n_coeffs), method=self.method)
        w = np.sqrt(dirichlet_weights(int(self.n_coeffs), alpha))
        self.section_norm_ = spectral_norm(w[:, None] * self.matrix_ / w[None, :]).value
        self.n_features_in_ = int(self.n_coeffs)
        return self

    def transform(self, X):
        """Coefficients of I(f), truncated to the first n_coeffs."""
        check_is_fitted(self, "matrix_")
        X = check_coefficients(X, self.n_features_in_)
        out = X @ self.matrix_.T
        return out.real if np.isrealobj(self.matrix_) and np.all(X.imag == 0) else out

    def predict(self, X):
        """I(f)(z) for each row f of X and each z in ``points``; shape (n_samples, n_points)."""
        check_is_fitted(self, "spec_")
        X = check_coefficients(X)
        z = check_points(self.points)
        quad = QuadratureConfig(nodes=self.quad_nodes, tol=self.tol)
        return np.stack([np.atleast_1d(apply_direct(self.spec_, AnalyticSeries(row), z, quad)) for row in X])

    def norm(self, X):
        """D_alpha norms of the rows of X (same weights as the section norm)."""
        X = check_coefficients(X)
        w = dirichlet_weights(X.shape[1], check_alpha(self.alpha))
        return np.sqrt(np.sum(w * np.abs(X) ** 2, axis=1))
