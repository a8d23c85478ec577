"""Exterior-algebra kernel: norms of simple r-vectors and of wedge powers of
linear maps.

A simple r-vector is represented by the list of its factor vectors, stacked
as the rows of an (r, n) array.  Its norm is the r-dimensional volume of the
parallelepiped they span, sqrt(det(D D^T)).
"""

import itertools

import numpy as np

DEPENDENCE_RTOL = 1e-10
ORTHO_RTOL = 1e-9


class DimensionMismatchError(ValueError):
    pass


def _as_matrix(vectors):
    D = np.atleast_2d(np.asarray(vectors, dtype=float))
    if D.ndim != 2:
        raise DimensionMismatchError("vectors must form an (r, n) matrix")
    r, n = D.shape
    if r > n:
        raise DimensionMismatchError(f"r={r} factors in R^{n} (need r <= n)")
    if not np.all(np.isfinite(D)):
        raise ValueError("non-finite entries")
    return D


def gram_norm(vectors):
    """Norm of v_1 ^ ... ^ v_r, the r-volume of the spanned parallelepiped.

    Computed through the R factor of a QR decomposition of D^T rather than
    det(D D^T) directly; the product of |R_ii| is the same volume and behaves
    better for nearly dependent factors.
    """
    D = _as_matrix(vectors)
    R = np.linalg.qr(D.T, mode="r")
    return float(np.prod(np.abs(np.diag(R))))


def is_dependent(vectors):
    """Scale-aware dependence test: volume below tol * product of lengths."""
    D = _as_matrix(vectors)
    lengths = np.linalg.norm(D, axis=1)
    if np.any(lengths == 0.0):
        return True
    return gram_norm(D) < DEPENDENCE_RTOL * float(np.prod(lengths))


def cauchy_binet_norm(vectors):
    """Same norm via the Cauchy-Binet formula: sqrt of the sum of squared
    maximal (r x r) minors of D.

    Enumerates all C(n, r) minors explicitly; intended as an independent
    oracle for gram_norm on small n, not as a fast path.
    """
    D = _as_matrix(vectors)
    r, n = D.shape
    total = 0.0
    for cols in itertools.combinations(range(n), r):
        total += np.linalg.det(D[:, cols]) ** 2
    return float(np.sqrt(total))


def wedge_operator_norm(L, r):
    """Operator norm of the r-th wedge power of a linear map.

    Equals the product of the r largest singular values of L; for a square
    map with r = n this is |det L|.
    """
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if not (1 <= r <= min(L.shape)):
        raise ValueError(f"r={r} out of range for a {L.shape} map")
    s = np.linalg.svd(L, compute_uv=False)
    return float(np.prod(s[:r]))


def perp_factor_check(v, u, tol=1e-9):
    """Check the factorization ||v ^ u|| = ||v|| * ||u|| for mutually
    perpendicular groups of vectors.

    Raises if some v_i is not orthogonal to some u_j (relative tolerance
    ORTHO_RTOL); returns True when the factorization holds within tol.
    """
    V = _as_matrix(v)
    U = _as_matrix(u)
    if V.shape[1] != U.shape[1]:
        raise DimensionMismatchError("v and u live in different spaces")
    dots = np.abs(V @ U.T)
    scale = np.outer(np.linalg.norm(V, axis=1), np.linalg.norm(U, axis=1))
    if np.any(dots > ORTHO_RTOL * np.maximum(scale, 1e-300)):
        raise ValueError("v and u are not perpendicular groups")
    combined = gram_norm(np.vstack([V, U]))
    product = gram_norm(V) * gram_norm(U)
    return abs(combined - product) <= tol * (1.0 + product)
