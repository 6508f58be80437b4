"""Blocks of the free resolvent and their norms.

The free resolvent ``(D0 - lam)^{-1}`` is a 2x2-block Laurent matrix whose
block at position ``(i, j)`` is ``T_{j-i}(k)``, with

    T_j = k**(j-1) T_1          for j >= 1,
    T_{-j} = T_j.T              (plain transpose).

Every function takes a :class:`~dirac_enclosures.spectral_map.KPoint`; its
fields may be arrays, in which case results broadcast.
"""
import numpy as np

from .linalg import dense_solve
from .spectral_map import k_from_lambda

#: powers of k below this modulus are flushed to zero
UNDERFLOW = 1e-300


def free_blocks(m):
    """Return the diagonal block ``b`` and super-diagonal block ``a`` of ``D0``."""
    b = np.array([[-m, 1.0], [1.0, m]], dtype=complex)
    a = np.array([[0.0, 0.0], [-1.0, 0.0]], dtype=complex)
    return b, a


def free_truncation(m, N):
    """Sharp-cut truncation of ``D0`` to the sites ``-N..N`` (dense, complex)."""
    b, a = free_blocks(m)
    n = 2 * N + 1
    D = np.zeros((2 * n, 2 * n), dtype=complex)
    for s in range(n):
        D[2 * s:2 * s + 2, 2 * s:2 * s + 2] = b
        if s + 1 < n:
            D[2 * s:2 * s + 2, 2 * s + 2:2 * s + 4] = a
            D[2 * s + 2:2 * s + 4, 2 * s:2 * s + 2] = a.T
    return D


def _stack(a11, a12, a21, a22):
    return np.stack([np.stack([a11, a12], -1), np.stack([a21, a22], -1)], -2)


def _t0(kp):
    k, lam, m = np.asarray(kp.k), np.asarray(kp.lam), kp.m
    pref = 1.0 / (1.0 / k - k)
    return pref[..., None, None] * _stack(lam - m, 1 - k, 1 - k, lam + m)


def _t1(kp):
    k, lam, m = np.asarray(kp.k), np.asarray(kp.lam), kp.m
    pref = k / (1.0 / k - k)
    return pref[..., None, None] * _stack(lam - m, 1 - k, 1 - 1.0 / k, lam + m)


def t_matrix(j, kp):
    """Resolvent block ``T_j(k)`` as a ``(..., 2, 2)`` array."""
    j = int(j)
    if j == 0:
        return _t0(kp)
    T = _t1(kp)
    if abs(j) > 1:
        scale = np.asarray(kp.k) ** (abs(j) - 1)
        scale = np.where(np.abs(scale) < UNDERFLOW, 0.0, scale)
        T = scale[..., None, None] * T
    if j < 0:
        T = np.swapaxes(T, -1, -2)
    return T


def _moduli(kp):
    lam, m = np.asarray(kp.lam), kp.m
    ak = np.abs(kp.k)
    lp, lm = np.abs(lam + m), np.abs(lam - m)
    l2 = np.abs(lam * lam - m * m)
    l4 = np.abs(lam * lam - m * m - 4.0)
    return ak, lp, lm, l2, l4


def t0_spectral_norm(kp):
    """Closed-form spectral norm of ``T_0(k)``.

    With ``T_0 T_0^* = [[p, r], [conj(r), q]]`` the discriminant
    ``B^2 - 4C`` equals ``(p - q)^2 + 4|r|^2``. That sum of squares is used
    instead, since the difference cancels when both singular values coincide.
    """
    ak, lp, lm, l2, l4 = _moduli(kp)
    lam, m = np.asarray(kp.lam), kp.m
    k = np.asarray(kp.k)
    B = (lp ** 2 + lm ** 2 + 2.0 * ak * l2) / (l2 * l4)
    w = 1.0 / np.abs(1.0 / k - k) ** 2
    p_minus_q = w * (lm ** 2 - lp ** 2)
    r = w * ((lam - m) * np.conj(1.0 - k) + (1.0 - k) * np.conj(lam + m))
    disc = p_minus_q ** 2 + 4.0 * np.abs(r) ** 2
    return np.sqrt(0.5 * (B + np.sqrt(disc)))


def t1_spectral_norm(kp):
    """Closed-form spectral norm of ``T_1(k)``."""
    ak, lp, lm, l2, l4 = _moduli(kp)
    return ak * np.sqrt((lp ** 2 + lm ** 2 + (ak + 1.0 / ak) * l2) / (l2 * l4))


def hs_norm_closed_form(j, kp):
    """Exact Hilbert-Schmidt norm of ``T_j(k)`` from its modulus formula."""
    lam, m = np.asarray(kp.lam), kp.m
    ak = np.abs(kp.k)
    k = np.asarray(kp.k)
    denom = np.abs(1.0 / k - k) ** 2
    # |k^{-1/2} - k^{1/2}|^2 written without a square-root branch
    gap = np.abs(1.0 - k) ** 2 / ak
    lm2, lp2 = np.abs(lam - m) ** 2, np.abs(lam + m) ** 2
    if j == 0:
        sq = (lm2 + lp2 + 2.0 * ak * gap) / denom
    else:
        n = abs(j)
        sq = ak ** (2 * n - 1) / denom * (ak * lm2 + ak * lp2 + (1.0 + ak * ak) * gap)
    return np.sqrt(sq)


def hs_bound(j, kp):
    """Entrywise upper bound on the Hilbert-Schmidt norm of ``T_j(k)``."""
    lam, m = np.asarray(kp.lam), kp.m
    k = np.asarray(kp.k)
    ak = np.abs(k)
    c = 1.0 if j == 0 else ak ** (abs(j) - 0.5)
    return c * (np.abs(lam - m) + np.abs(lam + m)) / np.abs(1.0 / k - k)


def truncated_free_resolvent(lam, m, N):
    """Dense inverse of the sharp-cut truncation of ``D0 - lam``.

    Site ``n`` occupies rows ``2(n+N), 2(n+N)+1``.  The result has shape
    ``(4N+2, 4N+2)``.
    """
    if N < 8:
        raise ValueError("N must be at least 8")
    k_from_lambda(lam, m)  # rejects spectral points
    D = free_truncation(m, N) - lam * np.eye(4 * N + 2)
    return dense_solve(D, np.eye(4 * N + 2, dtype=complex))


def resolvent_block(R, N, i, j):
    """Extract the 2x2 block for sites ``(i, j)`` from a truncated resolvent."""
    r, c = 2 * (i + N), 2 * (j + N)
    return R[r:r + 2, c:c + 2]
