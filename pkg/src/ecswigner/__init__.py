"""Entangled coherent states: construction, one-mode Wigner functions,
concurrence and photon loss, with a truncated Fock-space reference.

Modules
-------
fock         number-basis numerics used as the independent reference
coherent     coherent-state algebra, state builders and the cavity protocol
entanglement qubit/qutrit recasting and concurrence
phasespace   Wigner kernels, closed forms, grids and peak analysis
noise        photon loss on the qubit-like ECS
verify       closed form versus Fock-space cross-checks
"""

from .coherent import (
    OPTIMAL_EPSILONS,
    QED_WEIGHTS,
    ModeSuperposition,
    ProtocolConfig,
    TwoModeECS,
    apply_beamsplitter,
    apply_displacement,
    apply_phase_shifter,
    build_qubit_ecs,
    build_qutrit_ecs,
    build_qutrit_qed,
    generate_superposition,
    normalization,
    overlap,
    run_cavity_protocol,
    with_vacuum,
)
from .entanglement import (
    SeparationParams,
    concurrence_closed_qubit,
    concurrence_closed_qutrit,
    concurrence_pure_2x2,
    concurrence_vector_norm,
    concurrence_wootters,
    recast_qubit,
    recast_qutrit,
)
from .fock import adequate_ncut, oracle_ncut
from .noise import apply_noise, concurrence_noisy_closed, noisy_reduced_kernel, noisy_two_mode_density, wigner_noisy_closed
from .phasespace import (
    GridSpec,
    default_grid,
    find_peaks_profile,
    integrate_grid,
    kernel_peaks,
    peak_separation,
    reduce_to_kernel,
    transcendental_intersections,
    wigner_closed_qed,
    wigner_closed_qubit,
    wigner_closed_qutrit,
    wigner_grid,
    wigner_kernel,
)

__version__ = "0.1.0"
