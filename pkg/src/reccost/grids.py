"""Symmetric evaluation grids used by the defect, identity and certificate sweeps."""

import numpy as np

from .errors import DomainError


def symmetric_grid(half_width: float, step: float) -> tuple[float, np.ndarray]:
    """Uniform inclusive grid on [-half_width, half_width] containing 0 and both endpoints.

    The step is adjusted to the nearest value that tiles the interval exactly;
    the adjusted step is returned so reports can echo the grid actually used.
    The grid is bitwise symmetric, which keeps evenness checks exact.
    """
    if not (half_width > 0 and np.isfinite(half_width)):
        raise DomainError(f"grid half-width must be positive and finite, got {half_width}")
    if not (0 < step <= half_width) or not np.isfinite(step):
        raise DomainError(f"grid step must satisfy 0 < step <= {half_width}, got {step}")
    m = max(1, int(round(half_width / step)))
    right = np.linspace(0.0, half_width, m + 1)
    grid = np.concatenate([-right[:0:-1], right])
    return half_width / m, grid
