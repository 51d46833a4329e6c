"""Dense linear-algebra kernels shared by the factorization code.

Matrices are plain 2-D float64 ``numpy.ndarray`` objects. Every kernel
rejects non-finite input so that NaN/Inf never leak into an update rule.
"""

import numpy as np
import scipy.linalg

EPS_DIV = 1e-12
SYMMETRY_RTOL = 1e-10


class NotPositiveDefinite(np.linalg.LinAlgError):
    """Raised when a Cholesky pivot is non-positive.

    The usual remedy is to increase the regularization (alpha, gamma or the
    diagonal guard delta) feeding the system.
    """


class ShapeMismatch(ValueError):
    pass


def as_matrix(M, name="matrix"):
    """Return ``M`` as a finite 2-D float64 array."""
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def gram(X):
    """Return ``X.T @ X`` (columns-as-samples kernel matrix)."""
    X = as_matrix(X, "X")
    K = X.T @ X
    # exact symmetry; BLAS may differ in the last ulp between triangles
    return 0.5 * (K + K.T)


def solve_spd(A, B):
    """Solve ``A @ X = B`` for symmetric positive-definite ``A``.

    ``A`` is symmetrized as ``(A + A.T) / 2`` before the Cholesky
    factorization. Asymmetry beyond a relative 1e-10 is an error.

    Parameters
    ----------
    A : ndarray, shape (n, n)
    B : ndarray, shape (n,) or (n, m)

    Returns
    -------
    ndarray
        Same shape as ``B``.

    Raises
    ------
    NotPositiveDefinite
        If a pivot of the factorization is not strictly positive.
    """
    A = as_matrix(A, "A")
    B = np.asarray(B, dtype=np.float64)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"A must be square, got {A.shape}")
    if B.shape[0] != A.shape[0]:
        raise ShapeMismatch(f"A is {A.shape} but B has {B.shape[0]} rows")
    if not np.all(np.isfinite(B)):
        raise ValueError("B contains non-finite entries")
    scale = max(np.abs(A).max(initial=0.0), np.finfo(float).tiny)
    if np.abs(A - A.T).max(initial=0.0) > SYMMETRY_RTOL * scale:
        raise ValueError("A is not symmetric")
    A = 0.5 * (A + A.T)
    try:
        factor = scipy.linalg.cho_factor(A, lower=True, check_finite=False)
    except np.linalg.LinAlgError as err:
        raise NotPositiveDefinite(str(err)) from None
    if np.any(np.diag(factor[0]) <= 0.0):
        raise NotPositiveDefinite("non-positive Cholesky pivot")
    return scipy.linalg.cho_solve(factor, B, check_finite=False)


def pos_neg_split(M):
    """Split ``M`` into nonnegative parts with ``M == Mp - Mn``."""
    M = np.asarray(M, dtype=np.float64)
    return np.maximum(M, 0.0), np.maximum(-M, 0.0)


def safe_div(numer, denom, eps_div=EPS_DIV):
    """Entrywise ``numer / (denom + eps_div)`` for nonnegative inputs."""
    numer = np.asarray(numer, dtype=np.float64)
    denom = np.asarray(denom, dtype=np.float64)
    if numer.shape != denom.shape:
        raise ShapeMismatch(f"numerator {numer.shape} vs denominator {denom.shape}")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = numer / (denom + eps_div)
    # 0/0 only possible with eps_div == 0; an empty ratio leaves the factor alone
    out[~np.isfinite(out)] = 0.0
    return out


def frobenius_norm(M):
    return float(np.sqrt(np.sum(np.square(M))))


def column_l2_norms(M):
    return np.sqrt(np.sum(np.square(np.asarray(M, dtype=np.float64)), axis=0))


def l21_norm(M):
    """Sum of the Euclidean norms of the columns of ``M``."""
    return float(column_l2_norms(M).sum())
