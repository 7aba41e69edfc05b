"""Central finite-difference Jacobians for maps R^n -> R^m."""

from __future__ import annotations

from typing import Callable

import numpy as np


def central_jacobian(
    f: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    h: float | np.ndarray = 1e-6,
) -> np.ndarray:
    """J[i, j] = (f(x + h e_j)_i - f(x - h e_j)_i) / (2 h).

    `h` may be a scalar or a per-coordinate array.
    """
    x = np.asarray(x, dtype=float)
    steps = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    columns = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = steps[j]
        columns.append((np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2.0 * steps[j]))
    return np.column_stack(columns)
