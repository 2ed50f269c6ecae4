"""
Three coherent states from a dispersive cavity
==============================================

An atom crosses the cavity twice with classical-field rotations in between;
detecting it in |g> leaves the field in a superposition of |-2a>, |0>, |2a>
whose weights are set by the rotation parameters eps.
"""

import math

from ecswigner import OPTIMAL_EPSILONS, ProtocolConfig, apply_beamsplitter, apply_displacement, apply_phase_shifter, run_cavity_protocol, with_vacuum

res = run_cavity_protocol(ProtocolConfig(OPTIMAL_EPSILONS, 1.0))
terms = sorted(res.state.terms, key=lambda t: -t.amp.real)
ref = abs(terms[0].coeff)
for t in terms:
    print(f"amp={t.amp.real:+.3f}  weight={abs(t.coeff) / ref:.6f}")
print("success probability", res.probability)

for name, stage in res.history:
    print(name, "g:", len(stage.g_branch), "terms, e:", len(stage.e_branch), "terms")

# phase shift by pi, displace by beta and split on a 50-50 beam splitter: qutrit-like ECS
beta = 0.0
field = apply_displacement(apply_phase_shifter(res.state, math.pi), beta)
ecs = apply_beamsplitter(with_vacuum(field), math.pi / 4)
for c, a, b in ecs.normalize().terms:
    print(f"{c.real:+.6f} |{a.real:+.4f}>|{b.real:+.4f}>")
