"""Dense complex linear algebra used throughout the package.

2x2 matrices are plain ``numpy`` arrays of shape ``(..., 2, 2)``; the closed
forms below broadcast over the leading axes.  Dense eigenvalue problems and
linear solves are delegated to LAPACK.
"""
import warnings

import numpy as np
import scipy.linalg as sla

from .errors import NoConvergence, Singular

EPS = np.finfo(float).eps


def as_mat2(A):
    A = np.asarray(A, dtype=complex)
    if A.shape[-2:] != (2, 2):
        raise ValueError(f"expected (..., 2, 2) array, got shape {A.shape}")
    return A


def hs_norm_2x2(A):
    """Hilbert-Schmidt (Frobenius) norm of 2x2 matrices."""
    A = as_mat2(A)
    return np.sqrt(np.sum(np.abs(A) ** 2, axis=(-2, -1)))


def spectral_norm_2x2(A):
    r"""Largest singular value of 2x2 matrices.

    With :math:`AA^* = [[p, r], [\bar r, q]]`,
    :math:`\sigma_{max}^2 = (p + q + \sqrt{(p - q)^2 + 4|r|^2})/2`. The
    discriminant is a sum of squares, so it stays accurate when the two
    singular values nearly coincide.
    """
    A = as_mat2(A)
    # scale by the largest entry so that squares cannot overflow
    c = np.max(np.abs(A), axis=(-2, -1))
    safe = np.where(c > 0, c, 1.0)
    B = A / safe[..., None, None]
    p = np.abs(B[..., 0, 0]) ** 2 + np.abs(B[..., 0, 1]) ** 2
    q = np.abs(B[..., 1, 0]) ** 2 + np.abs(B[..., 1, 1]) ** 2
    r = B[..., 0, 0] * np.conj(B[..., 1, 0]) + B[..., 0, 1] * np.conj(B[..., 1, 1])
    return c * np.sqrt(0.5 * (p + q + np.sqrt((p - q) ** 2 + 4.0 * np.abs(r) ** 2)))


def psd_sqrt_2x2(W):
    """Square root of a Hermitian positive semidefinite 2x2 matrix.

    Eigenvalues are clamped at zero from below to absorb round-off.
    """
    W = as_mat2(W)
    W = 0.5 * (W + np.conj(np.swapaxes(W, -1, -2)))
    vals, vecs = np.linalg.eigh(W)
    root = np.sqrt(np.maximum(vals, 0.0))
    return (vecs * root[..., None, :]) @ np.conj(np.swapaxes(vecs, -1, -2))


def polar_decompose_2x2(A):
    """Polar decomposition ``A = U W`` of a 2x2 matrix.

    ``W = sqrt(A^* A)`` is Hermitian positive semidefinite and ``U`` is the
    partial isometry that vanishes on ``ker W``.

    Returns
    -------
    U, W : ndarray
        Arrays of the same shape as ``A``.
    """
    A = as_mat2(A)
    P, sig, Qh = np.linalg.svd(A)
    cut = 2.0 * EPS * sig[..., :1]
    keep = (sig > cut) & (sig > 0)
    Q = np.conj(np.swapaxes(Qh, -1, -2))
    W = (Q * sig[..., None, :]) @ Qh
    U = (P * keep[..., None, :]) @ Qh
    W = 0.5 * (W + np.conj(np.swapaxes(W, -1, -2)))
    return U, W


def dense_eigenvalues(A):
    """All eigenvalues of a square complex matrix, with multiplicity."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("dense_eigenvalues needs a square matrix")
    if A.shape[0] == 0:
        return np.empty(0, dtype=complex)
    try:
        return sla.eigvals(A, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def dense_eig(A):
    """Eigenvalues and right eigenvectors (columns, unit 2-norm)."""
    A = np.asarray(A, dtype=complex)
    try:
        return sla.eig(A, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def dense_solve(A, B):
    """Solve ``A X = B`` by LU with partial pivoting.

    Raises
    ------
    Singular
        If a pivot falls below ``n * eps * ||A||_inf``.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise ValueError("dense_solve needs a square matrix")
    norm_inf = np.max(np.sum(np.abs(A), axis=1)) if n else 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=True)
    if n and np.min(np.abs(np.diag(lu))) <= n * EPS * norm_inf:
        raise Singular("matrix is singular to working precision")
    return sla.lu_solve((lu, piv), B)


def tridiagonal_eigenvectors(A, eigenvalues, iterations=2, seed=0):
    """Right eigenvectors of a tridiagonal matrix by inverse iteration.

    Parameters
    ----------
    A : ndarray
        Square matrix with nonzero entries only on the three central diagonals.
    eigenvalues : ndarray
        Eigenvalues of ``A``, e.g. from :func:`dense_eigenvalues`.

    Returns
    -------
    ndarray
        Unit-norm eigenvectors as columns, aligned with ``eigenvalues``.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    diag = np.diag(A).copy()
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = np.diag(A, 1)
    ab[2, :-1] = np.diag(A, -1)
    scale = max(np.max(np.abs(A)), 1.0)
    start = np.random.default_rng(seed).standard_normal(n) + 0j
    vecs = np.empty((n, len(eigenvalues)), dtype=complex)
    for col, mu in enumerate(eigenvalues):
        x = start / np.linalg.norm(start)
        shift = mu
        for _ in range(iterations):
            ab[1] = diag - shift
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                try:
                    y = sla.solve_banded((1, 1), ab, x, check_finite=False)
                except np.linalg.LinAlgError:
                    shift = shift + 4 * EPS * scale
                    continue
            if not np.all(np.isfinite(y)):
                shift = shift + 4 * EPS * scale
                continue
            x = y / np.linalg.norm(y)
        vecs[:, col] = x
    return vecs
