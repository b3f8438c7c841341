"""
Light signals and the paradox window
====================================

Observers hold still on vertical worldlines and relay lightrays along
geodesic chords around a spinning particle.  The elapsed time of a
closed relay is its total length minus the period of the connection
form, so tight polygons against the spin can come back before they
left.  Keeping every relay station outside the paradox radius provably
prevents that, even though the rays themselves may dive through the
CTC region.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from conetime import (
    StationarySpacetime,
    build_cochain,
    cone_polygon_signal,
    is_paradoxical,
    paradox_guard,
    signal_time,
)
from conetime.library import cone_fan_double

THETA = math.pi / 3
SIGMA = 1.0

# %%
# The spacetime: a doubled polygon around a cone of angle pi/3 carrying
# spin 1 (its mirror apex carries the balancing spin -1).

surface = cone_fan_double(THETA, 4.0, 7)
residues = {vc.label: 0.0 for vc in surface.cone_points}
residues["apex"] = SIGMA
residues["apex_back"] = -SIGMA
st = StationarySpacetime(surface, build_cochain(surface, residues))
r0, rc = st.ctc_radii()["apex"]
print(f"CTC radius {r0:.6f}, paradox radius {rc:.6f}")

# %%
# Hexagonal relays at three radii: far outside (guarded), between the
# radii (unguarded but still safe), and on the CTC circle (paradoxical).

for radius in (2.0, 1.2, r0):
    w, legs = cone_polygon_signal(st, "apex", radius, 6, start_angle=0.013)
    sig = signal_time(st, w, legs)
    print(
        f"R={radius:.4f}  elapsed={sig.elapsed:+.6f}  "
        f"guard={'pass' if paradox_guard(st, w[:-1]) else 'fail'}  "
        f"paradox={'YES' if is_paradoxical(sig) else 'no'}"
    )

# %%
# Elapsed time of the hexagon relay as the radius shrinks: it crosses
# zero strictly inside the paradox radius (the guard is sufficient, not
# necessary) and is negative at the CTC radius.

radii = np.linspace(0.65, 2.6, 160)
elapsed = []
for radius in radii:
    w, legs = cone_polygon_signal(st, "apex", float(radius), 6, start_angle=0.013)
    elapsed.append(signal_time(st, w, legs).elapsed)

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.plot(radii, elapsed, lw=1.5)
ax.axhline(0, color="k", lw=0.8)
ax.axvline(r0, color="darkorange", ls="--", label="CTC radius")
ax.axvline(rc, color="crimson", ls="--", label="paradox radius")
ax.set_xlabel("hexagon radius")
ax.set_ylabel("elapsed time of the closed signal")
ax.set_title("Hexagonal relay around a spin-1, angle-pi/3 particle")
ax.legend()
fig.tight_layout()
fig.savefig("light_signals.png", dpi=120)
print("wrote light_signals.png")

# %%
# Finer and finer polygons hugging the CTC circle approach zero elapsed
# time from below: the boundary case of the loop-period inequality.

for k in (8, 32, 128, 512):
    w, legs = cone_polygon_signal(st, "apex", r0, k, start_angle=0.0137)
    print(f"k={k:4d}  elapsed={signal_time(st, w, legs).elapsed:+.3e}")
