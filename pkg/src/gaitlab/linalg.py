"""Small dense-matrix numerics used by the rest of the toolkit.

Both routines target matrices up to 9x9 and are thin contract-checked
wrappers over LAPACK through numpy: general eigenvalues and a
partial-pivoting linear solve with an explicit residual check.
"""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence, SingularMatrix


def eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """All eigenvalues (with multiplicity) of a real square matrix.

    Raises NoConvergence if the underlying QR iteration fails.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as err:  # pragma: no cover - LAPACK cap
        raise NoConvergence(str(err)) from err


def solve_dense(a: np.ndarray, b: np.ndarray, residual_tol: float = 1e-10) -> np.ndarray:
    """Solve A x = b by partial-pivot elimination.

    Raises SingularMatrix when A is singular or the residual exceeds
    ``residual_tol * ||A|| * ||x||`` (near-singular systems that LAPACK
    does not reject outright).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("entries must be finite")
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as err:
        raise SingularMatrix(str(err)) from err
    norm_a = np.linalg.norm(a)
    residual = np.linalg.norm(a @ x - b)
    if not np.all(np.isfinite(x)) or residual > residual_tol * max(
        norm_a * np.linalg.norm(x), np.linalg.norm(b), 1e-300
    ):
        raise SingularMatrix(f"residual {residual:.3e} too large; matrix near singular")
    return x
