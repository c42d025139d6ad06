"""Energy backflow and BLP non-Markovianity over cutoff and bath temperature.

A coarse 8x8 grid keeps this quick; the command line tool produces the full
maps. Most cells with energy backflow are also BLP non-Markovian. The
exception is a narrow valley where the BLP measure vanishes at low T_E.
"""
# %%
import numpy as np

from energy_backflow import GridSpec, sweep_backflow, sweep_blp

spec = GridSpec(n_omega=8, n_temp=8)
backflow = sweep_backflow(spec, coupling=0.1)
blp = sweep_blp(spec, coupling=0.1)


def show(title, grid):
    print(title)
    print("T_E \\ Omega " + " ".join(f"{om:7.2f}" for om in spec.omegas))
    for te, row in zip(spec.temps, grid.values):
        print(f"{te:11.2f} " + " ".join(f"{v:7.4f}" for v in row))
    print()


# %%
show("energy backflow", backflow)
show("BLP measure", blp)

# %%
print("backflow peak at (Omega, T_E) =", backflow.argmax())
has_backflow = backflow.values > 1e-6 * np.nanmax(backflow.values)
is_nonmarkov = blp.values > 1e-6 * np.nanmax(blp.values)
for i, j in np.argwhere(has_backflow & ~is_nonmarkov):
    print(f"backflow without BLP regrowth at Omega = {spec.omegas[j]:.2f}, "
          f"T_E = {spec.temps[i]:.2f}: backflow {backflow.values[i, j]:.1e}")
