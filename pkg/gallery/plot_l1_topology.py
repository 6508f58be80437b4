"""
Topology of the l1 enclosure
============================

For a potential with l1 norm at most ``Q`` every eigenvalue lies where
``Q * |lambda - m| * |lambda + m| / |k^{-1} - k|`` is at least 1. The
boundary of that set splits into four, two or one closed loops as ``Q``
crosses two thresholds. Here we trace it for ``m = 1``.
"""
import numpy as np

from dirac_enclosures.curves import component_count_check, l1_box, trace_l1_boundary
from dirac_enclosures.enclosures import lambda_pm, topology_thresholds

from _plotting import plt, save

m = 1.0
lo, hi = topology_thresholds(m)
print(f"thresholds on Q^2: {lo:.12f}, {hi:.12f}")

###############################################################################
# Trace the boundary for three budgets
# ------------------------------------
# Each budget sits in a different topology regime.

curves = {}
for Q in (0.5, 1.0, 1.5):
    grid = l1_box(m, Q)
    curves[Q] = trace_l1_boundary(m, Q, grid)
    print(f"Q = {Q}: {component_count_check(m, Q, grid)} loops")

###############################################################################
# Real-axis crossings
# -------------------
# For small budgets the loops meet the gap between the bands at two points.

print("lambda_-, lambda_+ at Q = 0.5:", np.round(lambda_pm(m, 0.5), 10))

if plt is not None:
    fig, axes = plt.subplots(1, 3, figsize=(12, 4), sharey=True)
    top = np.sqrt(m * m + 4)
    for ax, (Q, cs) in zip(axes, curves.items()):
        for line in cs.polylines:
            ax.plot(line.real, line.imag, lw=1)
        for sign in (-1, 1):
            ax.plot(sign * np.array([m, top]), [0, 0], "k", lw=3)
        ax.set_title(f"Q = {Q}")
        ax.set_aspect("equal")
    save(fig, "l1_topology.png")
