"""
Wigner function of the qubit-like ECS as beta grows
====================================================

Mode 1 of (|alpha>|alpha> + |beta>|beta>) / sqrt(M) shows one peak while
the two coherent states overlap and splits into two once they separate.
"""

import warnings

import numpy as np

from ecswigner import build_qubit_ecs, default_grid, kernel_peaks, peak_separation, reduce_to_kernel, wigner_grid

alpha = 2.0
# beta = alpha is the separable end of the sweep; the merge warning is expected there
warnings.filterwarnings("ignore", message="qubit ECS: coincident")
betas = np.arange(2.0, 6.01, 0.5)

# peaks are located along y = 0, where the real-amplitude Wigner function is maximal
for beta in betas:
    kernel = reduce_to_kernel(build_qubit_ecs(alpha, beta))
    peaks = kernel_peaks(kernel)
    xs = ", ".join(f"{p.x:.3f}" for p in peaks.peaks)
    print(f"beta={beta:.1f}  peaks={len(peaks)}  x=[{xs}]  separation={peak_separation(peaks):.4f}")

# full grid for one state; plotting is optional
kernel = reduce_to_kernel(build_qubit_ecs(alpha, 4.5))
grid = wigner_grid(kernel, default_grid(kernel.amplitudes))
print("grid", grid.values.shape, "min", grid.min_value())

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    X, Y = np.meshgrid(grid.xs, grid.ys)
    plt.contourf(X, Y, grid.values, 40)
    plt.xlabel("x")
    plt.ylabel("y")
    plt.title("W(x, y) for alpha=2, beta=4.5")
    plt.savefig("qubit_peaks.png", dpi=120)
