"""
Comparing the Lp enclosures
===========================

For ``p = 2`` and ``Q = 0.7`` we trace the Stein, Young and improved Stein
boundaries and check that eigenvalues of random potentials stay inside.
"""
import numpy as np

from dirac_enclosures.curves import default_box, spectrum_mask, trace_level_set
from dirac_enclosures.enclosures import bound_function
from dirac_enclosures.verify import run_containment

from _plotting import plt, save

m, p, Q = 1.0, 2.0, 0.7
grid = default_box(m, 400, 200)
curves = {}
for kind in ("stein", "young", "stein-improved"):
    F = bound_function(kind, m, p=p)
    curves[kind] = trace_level_set(lambda z: np.asarray(F(z)) * Q, 1.0, grid, mask=spectrum_mask(m, grid))
    print(f"{kind}: {curves[kind].component_count} components")

###############################################################################
# Random potentials
# -----------------

rep = run_containment(m, p, Q, "stein-improved", trials=5, N=200, seed=0)
print(f"{rep.tested} eigenvalues tested, {rep.violations} outside")

if plt is not None:
    fig, ax = plt.subplots(figsize=(7, 4))
    for kind, cs in curves.items():
        for i, line in enumerate(cs.polylines):
            ax.plot(line.real, line.imag, lw=1, color=f"C{list(curves).index(kind)}",
                    label=kind if i == 0 else None)
    for t in rep.trials:
        z = t.eigenvalues[t.genuine]
        ax.plot(z.real, z.imag, "k.", ms=2)
    ax.legend()
    ax.set_aspect("equal")
    save(fig, "bound_comparison.png")
