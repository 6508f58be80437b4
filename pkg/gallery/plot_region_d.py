"""
Where diagonal dominance fails
==============================

Region D needs ``|T0| >= |T1|``. In the unit disk of the spectral
parameter ``k`` this holds near the origin, but for ``m = 1/8`` there is a
set where it fails.
"""
import numpy as np

from dirac_enclosures.curves import region_d_scan

from _plotting import plt, save

scans = {m: region_d_scan(m) for m in (0.0, 0.125)}
for m, scan in scans.items():
    frac = scan.nondominant.sum() / scan.inside.sum()
    print(f"m = {m}: non-dominant fraction of the disk {frac:.4f}")

if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 4.5))
    for ax, (m, scan) in zip(axes, scans.items()):
        g = scan.grid
        img = np.where(scan.inside, scan.nondominant.astype(float), np.nan)
        ax.imshow(img.T, origin="lower", extent=(g.x_min, g.x_max, g.y_min, g.y_max), cmap="coolwarm")
        ax.set_title(f"m = {m}")
    save(fig, "region_d.png")
