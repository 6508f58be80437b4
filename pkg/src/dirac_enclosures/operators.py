"""Finitely supported potentials, truncated Dirac operators and the
Birman-Schwinger matrix.
"""
from dataclasses import dataclass
import math

import numpy as np

from .enclosures import conjugate_exponent, h_q
from .errors import BadExponent, SupportOverflow
from .linalg import (
    dense_eig,
    dense_eigenvalues,
    polar_decompose_2x2,
    psd_sqrt_2x2,
    spectral_norm_2x2,
    tridiagonal_eigenvectors,
)
from .resolvent import free_truncation, t0_spectral_norm, t1_spectral_norm, t_matrix
from .spectral_map import k_from_lambda

#: share of eigenvector mass that must sit in the central half of the window
LOCALIZATION = 0.999


@dataclass(frozen=True, eq=False)
class Potential:
    """Block-diagonal potential ``v_n``, ``n = offset, ..., offset + len - 1``.

    Sites outside the stored window carry the zero matrix.
    """

    offset: int
    blocks: np.ndarray

    def __post_init__(self):
        blocks = np.asarray(self.blocks, dtype=complex).reshape(-1, 2, 2)
        if not np.all(np.isfinite(blocks)):
            raise ValueError("potential entries must be finite")
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "offset", int(self.offset))

    def __len__(self):
        return self.blocks.shape[0]

    @property
    def sites(self):
        return np.arange(self.offset, self.offset + len(self))

    @classmethod
    def single_site(cls, block, site=0):
        return cls(site, np.asarray(block, dtype=complex)[None])

    @classmethod
    def from_sites(cls, mapping):
        """Build from ``{site: 2x2 block}``; gaps are zero-filled."""
        if not mapping:
            return cls(0, np.zeros((0, 2, 2)))
        lo, hi = min(mapping), max(mapping)
        blocks = np.zeros((hi - lo + 1, 2, 2), dtype=complex)
        for n, v in mapping.items():
            blocks[n - lo] = v
        return cls(lo, blocks)

    def scaled(self, factor):
        return Potential(self.offset, self.blocks * factor)

    def site_norms(self):
        return spectral_norm_2x2(self.blocks) if len(self) else np.zeros(0)

    def is_hermitian(self, tol=0.0):
        return bool(np.all(np.abs(self.blocks - np.conj(np.swapaxes(self.blocks, 1, 2))) <= tol))


@dataclass(frozen=True)
class PolarPotential:
    u_blocks: np.ndarray
    w_blocks: np.ndarray
    sqrt_w_blocks: np.ndarray


def lp_norm(V, p):
    """``l^p`` norm of a potential with the spectral norm on each site."""
    p = float(p)
    if not p >= 1:
        raise BadExponent(f"exponent must be >= 1, got {p}")
    norms = V.site_norms()
    if norms.size == 0:
        return 0.0
    if math.isinf(p):
        return float(norms.max())
    top = norms.max()
    if top == 0:
        return 0.0
    # factor out the maximum to avoid overflow for large p
    return float(top * np.sum((norms / top) ** p) ** (1.0 / p))


def build_truncated_dirac(m, V, N):
    """Dense ``(4N+2) x (4N+2)`` matrix of ``D0 + V`` on the sites ``-N..N``."""
    if len(V) and (V.offset < -N or V.offset + len(V) - 1 > N):
        raise SupportOverflow(f"potential support exceeds [-{N}, {N}]")
    D = free_truncation(m, N)
    for n, v in zip(V.sites, V.blocks):
        r = 2 * (n + N)
        D[r:r + 2, r:r + 2] += v
    return D


def polarize(V):
    """Per-site polar decomposition ``v_n = u_n w_n`` plus ``sqrt(w_n)``."""
    if len(V) == 0:
        empty = np.zeros((0, 2, 2), dtype=complex)
        return PolarPotential(empty, empty, empty)
    U, W = polar_decompose_2x2(V.blocks)
    return PolarPotential(U, W, psd_sqrt_2x2(W))


def birman_schwinger_matrix(lam, m, V):
    """Finite section of ``sqrt(W) (D0 - lam)^{-1} U sqrt(W)`` over the support
    window of ``V``; blocks are ``sqrt(w_i) T_{j-i} u_j sqrt(w_j)``."""
    kp = k_from_lambda(lam, m)
    L = len(V)
    if L == 0:
        return np.zeros((0, 0), dtype=complex)
    pol = polarize(V)
    T = {d: t_matrix(d, kp) for d in range(-(L - 1), L)}
    right = pol.u_blocks @ pol.sqrt_w_blocks
    K = np.zeros((2 * L, 2 * L), dtype=complex)
    for i in range(L):
        for j in range(L):
            K[2 * i:2 * i + 2, 2 * j:2 * j + 2] = pol.sqrt_w_blocks[i] @ T[j - i] @ right[j]
    return K


@dataclass(frozen=True)
class BSBounds:
    hs_style: float
    max_style: float
    young_style: float


def bs_norm_bounds(lam, m, V, p):
    """Three upper bounds on the norm of the Birman-Schwinger operator."""
    kp = k_from_lambda(lam, m)
    lam = complex(lam)
    v1 = lp_norm(V, 1)
    l2 = lam * lam - m * m
    hs = v1 * (abs(lam - m) + abs(lam + m)) / math.sqrt(abs(l2) * abs(l2 - 4.0))
    mx = max(float(t0_spectral_norm(kp)), float(t1_spectral_norm(kp))) * v1
    q = conjugate_exponent(p)
    young = mx if math.isinf(q) else float(h_q(lam, m, q)) * lp_norm(V, p)
    return BSBounds(hs, mx, young)


def localization(vectors, N):
    """Share of each eigenvector's squared norm on the sites ``|n| <= N/2``."""
    sites = np.repeat(np.arange(-N, N + 1), 2)
    inner = np.abs(sites) <= N // 2
    w = np.abs(vectors) ** 2
    return w[inner].sum(axis=0) / w.sum(axis=0)


def truncated_spectrum(m, V, N):
    """Eigenvalues of the truncated ``D0 + V`` with a genuineness flag.

    An eigenvalue is genuine when at least ``LOCALIZATION`` of its
    eigenvector's squared norm lies in the central half of the window;
    the rest are treated as artifacts of the sharp cut.
    """
    D = build_truncated_dirac(m, V, N)
    if np.any(np.triu(D, 2)) or np.any(np.tril(D, -2)):
        vals, vecs = dense_eig(D)
    else:
        # interleaved site ordering keeps D0 + V tridiagonal
        vals = dense_eigenvalues(D)
        vecs = tridiagonal_eigenvectors(D, vals)
    genuine = localization(vecs, N) >= LOCALIZATION
    order = np.lexsort((vals.imag, vals.real))
    return vals[order], genuine[order]


def parse_potential(text):
    """Parse the text format ``n re11 im11 re12 im12 re21 im21 re22 im22``."""
    sites = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 9:
            raise ValueError(f"line {lineno}: expected 9 fields, got {len(parts)}")
        n = int(parts[0])
        x = [float(s) for s in parts[1:]]
        if n in sites:
            raise ValueError(f"line {lineno}: site {n} given twice")
        sites[n] = np.array([[x[0] + 1j * x[1], x[2] + 1j * x[3]],
                             [x[4] + 1j * x[5], x[6] + 1j * x[7]]])
    return Potential.from_sites(sites)


def load_potential(path):
    with open(path) as fh:
        return parse_potential(fh.read())


def format_potential(V):
    lines = ["# n re11 im11 re12 im12 re21 im21 re22 im22"]
    for n, v in zip(V.sites, V.blocks):
        if not np.any(v):
            continue
        vals = " ".join(f"{z.real:.17g} {z.imag:.17g}" for z in v.ravel())
        lines.append(f"{n} {vals}")
    return "\n".join(lines) + "\n"
