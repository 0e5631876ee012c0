"""Input checks shared by the estimator and the command line."""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionError, DomainError


def check_coefficients(X, n_features: int | None = None) -> np.ndarray:
    """Return X as a 2-D complex array of Taylor coefficients, one function per row.

    A 1-D input is read as a single function.  Columns beyond ``n_features``
    must be zero; missing columns are zero-padded.
    """
    X = np.asarray(X)
    if X.dtype == object:
        raise TypeError("coefficients must be numeric")
    X = np.atleast_2d(X.astype(complex, copy=False))
    if X.ndim != 2:
        raise DimensionError(f"expected a 2-D array of coefficients, got shape {X.shape}")
    if X.shape[0] == 0 or X.shape[1] == 0:
        raise DimensionError("empty coefficient array")
    if not np.all(np.isfinite(X)):
        raise ValueError("coefficients must be finite")
    if n_features is None:
        return X
    if X.shape[1] > n_features:
        if np.any(X[:, n_features:] != 0):
            raise DimensionError(f"functions have degree >= {n_features}; refit with more coefficients")
        return X[:, :n_features]
    out = np.zeros((X.shape[0], n_features), dtype=complex)
    out[:, : X.shape[1]] = X
    return out


def check_points(z, closed: bool = False) -> np.ndarray:
    """Complex points in the open (or, with ``closed``, the closed) unit disc."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.all(np.isfinite(z)):
        raise ValueError("points must be finite")
    r = np.abs(z)
    if np.any(r > 1.0) if closed else np.any(r >= 1.0):
        raise DomainError("points must lie in the unit disc")
    return z


def check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    return alpha


def check_t(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any((t < 0.0) | (t > 1.0)) or not np.all(np.isfinite(t)):
        raise DomainError("t must lie in [0, 1]")
    return t


def parse_complex(text: str) -> complex:
    """Parse ``0.5``, ``0.3+0.2j``, ``0.3+0.2i`` or ``[0.3, 0.2]``."""
    s = text.strip()
    if s.startswith("["):
        re_, im = (float(v) for v in s.strip("[]").split(","))
        return complex(re_, im)
    return complex(s.replace(" ", "").replace("i", "j"))
