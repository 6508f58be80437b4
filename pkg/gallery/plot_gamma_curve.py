"""
Sharp boundary curve and region D
=================================

The Young bound with ``q = inf`` gives the curve ``Q * h_inf(lambda) = 1``.
On the part of that curve where ``|T0| >= |T1|`` a rank-one potential of
norm ``Q`` places an eigenvalue exactly on the curve. We sample the curve
and flag the points of region D for ``m = 1/2``.
"""
import numpy as np

from dirac_enclosures.curves import default_box, gamma_q_points
from dirac_enclosures.verify import optimality_suite

from _plotting import plt, save

m = 0.5
grid = default_box(m)
traced = {Q: gamma_q_points(m, Q, grid) for Q in (0.75, 0.9)}
for Q, cs in traced.items():
    print(f"Q = {Q}: {cs.points().size} points, fraction in D = {np.mean(cs.point_flags()):.3f}")

###############################################################################
# Attaining the curve
# -------------------
# A few polished points with their optimal potentials on a truncated lattice.

for w in optimality_suite(m, 0.9, 3, N=200):
    print(f"lambda = {w.lam:.6f}  det residual {w.det_residual:.1e}  eigenvalue gap {w.eig_gap:.1e}")

if plt is not None:
    fig, ax = plt.subplots(figsize=(7, 4))
    for Q, cs in traced.items():
        pts, flags = cs.points(), cs.point_flags()
        ax.scatter(pts.real[flags], pts.imag[flags], s=1, label=f"Q = {Q}, in D")
        ax.scatter(pts.real[~flags], pts.imag[~flags], s=1, c="grey")
    ax.set_aspect("equal")
    ax.legend(markerscale=8)
    save(fig, "gamma_curve.png")
