"""Level-set tracing over rectangular grids in the complex plane.

Boundary curves are extracted with marching squares.  Each crossing is located
on a grid edge and refined by bisection; segments are joined into polylines
through the grid edges they share, so stitching is exact.
"""
from collections import defaultdict
from dataclasses import dataclass, field
import math

import numpy as np

from .enclosures import classify_topology, h_q, in_region_D, l1_boundary_function
from .errors import NonFinite
from .resolvent import t0_spectral_norm, t1_spectral_norm
from .spectral_map import KPoint, dist_to_spectrum, lambda_pair_from_k

MAX_BISECTIONS = 60


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise ValueError("grid needs at least 8 nodes per axis")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid box is empty")

    @property
    def xs(self):
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ys(self):
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def cell_diagonal(self):
        return math.hypot((self.x_max - self.x_min) / (self.nx - 1),
                          (self.y_max - self.y_min) / (self.ny - 1))

    @property
    def diameter(self):
        return math.hypot(self.x_max - self.x_min, self.y_max - self.y_min)

    def nodes(self):
        """Complex node coordinates, indexed ``[ix, iy]``."""
        return self.xs[:, None] + 1j * self.ys[None, :]

    def doubled(self):
        return Grid(self.x_min, self.x_max, self.y_min, self.y_max, 2 * self.nx, 2 * self.ny)


def default_box(m, nx=800, ny=400):
    top = math.sqrt(m * m + 4.0) + 1.0
    return Grid(-top, top, -2.0, 2.0, nx, ny)


@dataclass
class CurveSet:
    """Stitched polylines; closed ones repeat their first point at the end."""

    polylines: list = field(default_factory=list)
    closed_flags: list = field(default_factory=list)
    flags: list = None

    @property
    def component_count(self):
        return len(self.polylines)

    def points(self):
        if not self.polylines:
            return np.zeros(0, dtype=complex)
        return np.concatenate(self.polylines)

    def point_flags(self):
        if self.flags is None:
            return None
        if not self.flags:
            return np.zeros(0, dtype=bool)
        return np.concatenate(self.flags)


def _evaluate(F, Z, valid):
    G = np.full(Z.shape, np.nan)
    if np.any(valid):
        vals = np.asarray(F(Z[valid]), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise NonFinite("level function is not finite on the unmasked grid")
        G[valid] = vals
    return G


def _refine(F, a, b, ga, gb, tol):
    """Bisection for sign changes of ``F`` on the segments ``[a, b]``."""
    t = np.where(ga == gb, 0.5, ga / (ga - gb))
    t = np.clip(t, 0.0, 1.0)
    lo, hi = np.zeros_like(t), np.ones_like(t)
    glo = ga.copy()
    best_t, best_g = t.copy(), np.full_like(t, np.inf)
    for _ in range(MAX_BISECTIONS + 1):
        g = np.asarray(F(a + t * (b - a)), dtype=float)
        if not np.all(np.isfinite(g)):
            raise NonFinite("level function is not finite along a cell edge")
        better = np.abs(g) < np.abs(best_g)
        best_t = np.where(better, t, best_t)
        best_g = np.where(better, g, best_g)
        todo = np.abs(best_g) > tol
        if not np.any(todo):
            break
        same = np.sign(g) == np.sign(glo)
        lo = np.where(same, t, lo)
        glo = np.where(same, g, glo)
        hi = np.where(same, hi, t)
        t = np.where(todo, 0.5 * (lo + hi), t)
    return a + best_t * (b - a)


def trace_level_set(F, level, grid, refine_tol=1e-10, mask=None, flag=None):
    """Trace ``{z : F(z) = level}`` over ``grid``.

    Parameters
    ----------
    F : callable
        Vectorized real-valued function of complex arguments.
    level : float
    grid : Grid
    refine_tol : float
        Crossings are refined until ``|F - level| <= refine_tol * (1 + |level|)``.
    mask : callable, optional
        Boolean function of complex nodes; ``True`` marks excluded nodes whose
        cells are skipped.
    flag : callable, optional
        Boolean function evaluated at each emitted point.

    Returns
    -------
    CurveSet
    """
    Z = grid.nodes()
    valid = np.ones(Z.shape, dtype=bool) if mask is None else ~np.asarray(mask(Z), dtype=bool)

    def G_of(z):
        return np.asarray(F(z), dtype=float) - level

    G = _evaluate(G_of, Z, valid)
    nx, ny = grid.nx, grid.ny
    H = (nx - 1) * ny

    pos = G >= 0
    c0, c1 = (slice(0, -1), slice(0, -1)), (slice(1, None), slice(0, -1))
    c2, c3 = (slice(1, None), slice(1, None)), (slice(0, -1), slice(1, None))
    cell_ok = valid[c0] & valid[c1] & valid[c2] & valid[c3]
    s0, s1, s2, s3 = pos[c0], pos[c1], pos[c2], pos[c3]

    ii, jj = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1), indexing="ij")
    e_bottom = ii * ny + jj
    e_top = ii * ny + jj + 1
    e_left = H + ii * (ny - 1) + jj
    e_right = H + (ii + 1) * (ny - 1) + jj
    ids = np.stack([e_bottom, e_right, e_top, e_left], -1)
    cross = np.stack([s0 != s1, s1 != s2, s2 != s3, s3 != s0], -1) & cell_ok[..., None]
    count = cross.sum(-1)

    segs = [ids[count == 2][cross[count == 2]].reshape(-1, 2)]
    saddle = np.argwhere(count == 4)
    if len(saddle):
        centers = Z[saddle[:, 0], saddle[:, 1]] + 0.5 * (Z[1, 1] - Z[0, 0])
        gc = np.asarray(G_of(centers), dtype=float)
        corner_mean = 0.25 * (G[saddle[:, 0], saddle[:, 1]] + G[saddle[:, 0] + 1, saddle[:, 1]]
                              + G[saddle[:, 0], saddle[:, 1] + 1] + G[saddle[:, 0] + 1, saddle[:, 1] + 1])
        gc = np.where(np.isfinite(gc), gc, corner_mean)
        extra = []
        for (i, j), g in zip(saddle, gc):
            b, r, t, l = ids[i, j]
            center_pos = g >= 0
            # corners 0 and 2 share a sign in a saddle cell
            if center_pos == s0[i, j]:
                extra += [(b, r), (t, l)]
            else:
                extra += [(b, l), (r, t)]
        segs.append(np.array(extra, dtype=ids.dtype))
    segs = np.concatenate(segs) if segs else np.zeros((0, 2), dtype=int)
    if len(segs) == 0:
        return CurveSet([], [], [] if flag is not None else None)

    edges = np.unique(segs)
    is_vert = edges >= H
    hi_ = np.where(is_vert, (edges - H) // (ny - 1), edges // ny)
    hj = np.where(is_vert, (edges - H) % (ny - 1), edges % ny)
    ai, aj = hi_, hj
    bi, bj = np.where(is_vert, hi_, hi_ + 1), np.where(is_vert, hj + 1, hj)
    a, b = Z[ai, aj], Z[bi, bj]
    tol = refine_tol * (1.0 + abs(level))
    pts = _refine(G_of, a, b, G[ai, aj], G[bi, bj], tol)
    point_of = dict(zip(edges.tolist(), pts))

    adj = defaultdict(list)
    for k, (e1, e2) in enumerate(segs.tolist()):
        adj[e1].append((k, e2))
        adj[e2].append((k, e1))
    used = np.zeros(len(segs), dtype=bool)

    def walk(start):
        chain = [start]
        cur = start
        while True:
            nxt = [(k, e) for k, e in adj[cur] if not used[k]]
            if not nxt:
                return chain
            k, e = nxt[0]
            used[k] = True
            chain.append(e)
            cur = e

    chains = []
    for e, nb in adj.items():
        if len(nb) == 1 and not used[nb[0][0]]:
            chains.append((walk(e), False))
    for k in range(len(segs)):
        if not used[k]:
            chain = walk(int(segs[k, 0]))
            chains.append((chain, chain[0] == chain[-1]))

    polylines, closed = [], []
    for chain, is_closed in chains:
        polylines.append(np.array([point_of[e] for e in chain]))
        closed.append(bool(is_closed))
    flags = None
    if flag is not None:
        flags = [np.asarray(flag(p), dtype=bool).reshape(-1) for p in polylines]
    return CurveSet(polylines, closed, flags)


def spectrum_mask(m, grid):
    """Mask of nodes closer to the essential spectrum than half a cell diagonal."""
    radius = 0.5 * grid.cell_diagonal
    return lambda z: np.asarray(dist_to_spectrum(z, m)) < radius


def l1_radius_bound(m, Q):
    """Radius of a disk containing the whole l1 enclosure."""
    m2 = m * m

    def outside(r):
        return (r * r - m2) * (r * r - m2 - 4.0) > 4.0 * (r + m) ** 2 * Q * Q

    lo = math.sqrt(m2 + 4.0)
    hi = 2.0 * lo + 4.0 * Q + 1.0
    while not outside(hi):
        hi *= 2.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if outside(mid):
            hi = mid
        else:
            lo = mid
    return hi


def l1_box(m, Q, nx=800, ny=400):
    """Default box widened so that the whole l1 enclosure fits strictly inside."""
    base = default_box(m, nx, ny)
    r = l1_radius_bound(m, Q) + 0.5
    x = max(base.x_max, r)
    y = max(base.y_max, r)
    return Grid(-x, x, -y, y, nx, ny)


def trace_l1_boundary(m, Q, grid, refine_tol=1e-10):
    return trace_level_set(lambda z: l1_boundary_function(z, m, Q), 0.0, grid, refine_tol)


def component_count_check(m, Q, grid=None):
    """Number of traced loops of the l1 enclosure boundary."""
    classify_topology(m, Q)
    grid = l1_box(m, Q) if grid is None else grid
    return trace_l1_boundary(m, Q, grid).component_count


def gamma_q_points(m, Q, grid, refine_tol=1e-10):
    """Trace ``h_inf(lam) Q = 1`` with each point flagged by diagonal dominance."""
    return trace_level_set(lambda z: np.asarray(h_q(z, m, math.inf)) * Q, 1.0, grid, refine_tol,
                           mask=spectrum_mask(m, grid),
                           flag=lambda z: np.asarray(in_region_D(z, m)))


@dataclass(frozen=True)
class KRaster:
    """Boolean raster over a grid in the k-plane, indexed ``[ix, iy]``."""

    grid: Grid
    inside: np.ndarray
    nondominant: np.ndarray


def region_d_scan(m, grid=None):
    """Mark the k-points of the unit disk where ``|T0(k)| < |T1(k)|``."""
    grid = Grid(-1.0, 1.0, -1.0, 1.0, 400, 400) if grid is None else grid
    K = grid.nodes()
    ak = np.abs(K)
    inside = (ak > 0) & (ak < 1)
    k = K[inside]
    lam, _ = lambda_pair_from_k(k, m)
    kp = KPoint(k, float(m), lam)
    out = np.zeros(K.shape, dtype=bool)
    out[inside] = t0_spectral_norm(kp) < t1_spectral_norm(kp)
    return KRaster(grid, inside, out)


def polish_real_root(f, x0, h=1e-7, tol=1e-14, maxiter=50):
    """Newton iteration with a central-difference derivative for real ``f``."""
    x = float(x0)
    for _ in range(maxiter):
        fx = f(x)
        step_h = h * (1.0 + abs(x))
        d = (f(x + step_h) - f(x - step_h)) / (2 * step_h)
        if d == 0:
            break
        dx = fx / d
        x -= dx
        if abs(dx) <= tol * (1.0 + abs(x)):
            break
    return x


def newton_polish(F, z0, tol=1e-13, maxiter=50, h=1e-7):
    """Drive a real function of a complex variable to zero with minimum-norm
    Newton steps; the gradient comes from central differences."""
    z = complex(z0)
    for _ in range(maxiter):
        g = float(F(z))
        if abs(g) <= tol:
            break
        step_h = h * (1.0 + abs(z))
        gx = (float(F(z + step_h)) - float(F(z - step_h))) / (2 * step_h)
        gy = (float(F(z + 1j * step_h)) - float(F(z - 1j * step_h))) / (2 * step_h)
        n2 = gx * gx + gy * gy
        if n2 == 0:
            break
        z = z - g * complex(gx, gy) / n2
    return z


def real_axis_crossings(curves, lo, hi):
    """Points where polylines cross the real axis with ``lo < x < hi``."""
    out = []
    for line in curves.polylines:
        y = line.imag
        for p, q, yp, yq in zip(line[:-1], line[1:], y[:-1], y[1:]):
            if yp == 0:
                x = p.real
            elif yp * yq < 0:
                x = p.real + (q.real - p.real) * yp / (yp - yq)
            else:
                continue
            if lo < x < hi:
                out.append(x)
    return np.sort(np.array(out))

