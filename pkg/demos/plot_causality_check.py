"""
Checking global hyperbolicity
=============================

A stationary spacetime over a cone surface behaves causally iff three
things hold: every CTC disk embeds, the disks stay pairwise disjoint,
and no loop outside them picks up more period than length.  This script
runs the checker on the pillowcase while the spins grow, and locates
the spin where the disks collide.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from conetime import StationarySpacetime, build_cochain, gh_check
from conetime.library import pillowcase

surface = pillowcase()

# %%
# Spins (s, -s, 0, 0) on two adjacent corners.  Each corner has cone
# angle pi, so its CTC radius is s/pi; the corners sit at distance 1,
# and the disks collide at s = pi/2.

def spacetime(s):
    residues = {"p0": s, "p1": -s, "p2": 0.0, "p3": 0.0}
    return StationarySpacetime(surface, build_cochain(surface, residues))


for s in (0.0, 0.5, 1.0, math.pi / 2, 2.0):
    report = gh_check(spacetime(s), loop_cutoff=4.0)
    extra = ""
    if report.loop_report is not None:
        extra = (
            f", worst loop ratio {report.loop_report.worst_ratio:.3f} "
            f"({report.loop_report.n_loops} loops kept, "
            f"{report.loop_report.n_dropped} near-disk loops dropped)"
        )
    if report.failed_condition:
        extra = f", condition {report.failed_condition}: {report.witness}"
    print(f"s={s:<8.4f} {report.verdict}{extra}")

# %%
# The worst sampled loop ratio grows linearly with the spin (the
# dominating loop is the length-2 waist with period s), while the
# disjointness margin shrinks.  Past s ~ 1 the growing disks swallow the
# sampled waist loops entirely, so the certified ratio drops back to
# zero: the report is a lower bound over loops avoiding the disks.

spins = np.linspace(0.0, 1.0, 11)
ratios = []
margins = []
for s in spins:
    report = gh_check(spacetime(float(s)), loop_cutoff=4.0)
    ratios.append(
        report.loop_report.worst_ratio if report.loop_report is not None else np.nan
    )
    margins.append(min(p.distance - p.radius_sum for p in report.pairs))

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.plot(spins, ratios, "o-", label="worst loop ratio (fails at 1)")
ax.plot(spins, margins, "s-", label="disk disjointness margin (fails at 0)")
ax.axhline(1.0, color="crimson", ls="--", lw=0.8)
ax.axhline(0.0, color="k", lw=0.8)
ax.set_xlabel("spin s on the corner pair")
ax.set_title("Global-hyperbolicity margins on the pillowcase")
ax.legend()
fig.tight_layout()
fig.savefig("causality_check.png", dpi=120)
print("wrote causality_check.png")
