"""
Concurrence of qubit-like and qutrit-like ECS
==============================================

The qubit value depends only on the separation |alpha - beta| and saturates
at 1; the qutrit value saturates at 2/sqrt(3) ~ 1.1547 once all three
coherent states are nearly orthogonal.
"""

import numpy as np

from ecswigner import (
    SeparationParams,
    build_qubit_ecs,
    build_qutrit_ecs,
    concurrence_closed_qubit,
    concurrence_closed_qutrit,
    concurrence_pure_2x2,
    concurrence_vector_norm,
    recast_qubit,
    recast_qutrit,
)

for delta in np.arange(0.25, 3.01, 0.25):
    pipe = concurrence_pure_2x2(recast_qubit(build_qubit_ecs(0.0, delta)))
    print(f"delta={delta:.2f}  closed={concurrence_closed_qubit(delta):.10f}  pipeline={pipe:.10f}")

# qutrit: equal spacing d between neighbours
for d in (0.5, 1.0, 1.5, 2.0, 3.0, 10.0):
    amps = (0.0, d, 2 * d)
    closed = concurrence_closed_qutrit(SeparationParams.from_amplitudes(*amps))
    pipe = concurrence_vector_norm(recast_qutrit(build_qutrit_ecs(*amps)))
    print(f"spacing={d:5.1f}  closed={closed:.10f}  pipeline={pipe:.10f}")

print("limit 2/sqrt(3) =", 2 / np.sqrt(3))
