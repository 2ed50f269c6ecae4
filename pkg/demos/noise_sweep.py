"""
Photon loss on the qubit-like ECS
=================================

Both modes pass through a beam splitter of transmissivity eta against
vacuum.  Concurrence and peak separation fall together as eta drops; at
eta = 0 the mode is in vacuum and the two peaks have merged.
"""

import math

import numpy as np

from ecswigner import apply_noise, concurrence_noisy_closed, concurrence_wootters, kernel_peaks, noisy_reduced_kernel, noisy_two_mode_density, peak_separation

alpha, beta = 4.0, 6.0
p = math.exp(-0.5 * (alpha - beta) ** 2)

print("eta    C_closed      C_wootters    separation")
for eta in np.linspace(0, 1, 11):
    c = concurrence_noisy_closed(p, eta)
    cw = concurrence_wootters(noisy_two_mode_density(alpha, beta, eta))
    sep = peak_separation(kernel_peaks(noisy_reduced_kernel(apply_noise(alpha, beta, eta))))
    print(f"{eta:.1f}  {c:.10f}  {cw:.10f}  {sep:.4f}")
