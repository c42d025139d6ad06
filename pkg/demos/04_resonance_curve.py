"""Cutoffs at which the effective spectral density is flat at the qubit frequency.

On this curve the thermal-weighted spectrum seen by the qubit has zero slope,
and the energy backflow stays a few percent of its peak over the map.
"""
# %%
import numpy as np

from energy_backflow import (BathParams, backflow_measure,
                             effective_spectral_density, resonance_curve,
                             resonance_deviation)

temps = np.array([0.5, 1.0, 2.0, 3.0, 5.0])
cutoffs = resonance_curve(temps)

# %%
# The slope of J_eff at omega0 vanishes along the curve.
for te, om in zip(temps, cutoffs):
    p = BathParams(0.1, float(om), float(te))
    print(f"T_E = {te:3.1f}: Omega_res = {om:.5f}, slope = {resonance_deviation(p):.1e}")

# %%
# Neighbouring frequencies sample J_eff symmetrically around omega0.
p = BathParams(0.1, float(cutoffs[1]), 1.0)
w = np.array([0.9, 1.0, 1.1])
print("J_eff near omega0:", effective_spectral_density(w, p))

# %%
# Backflow on the curve relative to the peak of the map, near Omega = omega0
# in a hot bath.
peak = backflow_measure(BathParams(0.1, 1.0, 5.0)).value
for te, om in zip(temps[:3], cutoffs[:3]):
    on = backflow_measure(BathParams(0.1, float(om), float(te))).value
    print(f"T_E = {te:3.1f}: on curve {on:.2e}, {on / peak:.1%} of the peak {peak:.4f}")
