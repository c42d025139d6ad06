"""Bath correlation kernels of an Ohmic bath with exponential cutoff.

The noise kernel D1 is evaluated in closed form through the trigamma function
and compared against direct quadrature of its Fourier integral. The
dissipation kernel D2 is elementary.
"""
# %%
import numpy as np

from energy_backflow.bath import (BathParams, dissipation_kernel, noise_kernel,
                                  noise_kernel_quadrature)

p = BathParams(coupling=0.1, cutoff=0.4, temp=1.0)
taus = np.array([0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0])

# %%
# Closed form against quadrature, point by point.
print(f"{'tau':>6} {'D1 closed':>14} {'D1 quadrature':>14} {'D2':>14}")
for tau in taus:
    d1 = float(noise_kernel(tau, p))
    ref = noise_kernel_quadrature(tau, p)
    d2 = float(dissipation_kernel(tau, p))
    print(f"{tau:6.1f} {d1:14.8f} {ref:14.8f} {d2:14.8f}")

# %%
# A hotter bath keeps the noise kernel correlated for longer.
for temp in (0.2, 1.0, 5.0):
    q = BathParams(0.1, 0.4, temp)
    tail = noise_kernel(np.array([5.0, 10.0]), q)
    print(f"T_E = {temp:3.1f}: D1(5) = {tail[0]: .3e}, D1(10) = {tail[1]: .3e}")
