"""Sample grids on the unit disc and on the parameter interval."""

import numpy as np

DEFAULT_RADII = 41
DEFAULT_ANGLES = 64
DEFAULT_T_NODES = 33


def polar_grid(n_radii: int = DEFAULT_RADII, n_angles: int = DEFAULT_ANGLES, rmax: float = 1.0 - 1e-6) -> np.ndarray:
    """Flattened polar grid ``rmax * k/n_radii * exp(2 pi i j/n_angles)``, k = 1..n_radii."""
    if n_radii < 1 or n_angles < 1:
        raise ValueError("grid needs at least one radius and one angle")
    if not 0 < rmax < 1:
        raise ValueError("rmax must lie in (0, 1)")
    r = rmax * np.arange(1, n_radii + 1) / n_radii
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles
    return (r[:, None] * np.exp(1j * theta[None, :])).ravel()


def interior_t_grid(n: int = DEFAULT_T_NODES) -> np.ndarray:
    """Equispaced nodes k/(n+1), k = 1..n, strictly inside (0, 1)."""
    if n < 1:
        raise ValueError("need at least one t node")
    return np.arange(1, n + 1) / (n + 1.0)


def parse_grid(text: str) -> tuple[int, int]:
    """Parse ``"41x64"`` into (radii, angles)."""
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError as exc:
        raise ValueError(f"grid must look like 41x64, got {text!r}") from exc
