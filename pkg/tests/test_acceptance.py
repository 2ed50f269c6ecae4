"""End-to-end acceptance checks, one test per criterion.

beta = 2 with alpha = 2 is the separable end of the peak sweep, so the
coincident-amplitude warning is expected there.  Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import itertools
import math
import time
import warnings

import numpy as np
import pytest

pytestmark = pytest.mark.filterwarnings("ignore::ecswigner.coherent.DegenerateAmplitudeWarning")

from conftest import ACCEPTANCE
from ecswigner import verify
from ecswigner.coherent import OPTIMAL_EPSILONS, ProtocolConfig, build_qubit_ecs, build_qutrit_ecs, run_cavity_protocol
from ecswigner.entanglement import (
    NearDegenerateWarning,
    SeparationParams,
    concurrence_closed_qubit,
    concurrence_closed_qutrit,
    concurrence_pure_2x2,
    concurrence_vector_norm,
    concurrence_wootters,
    recast_qubit,
    recast_qutrit,
)
from ecswigner.noise import apply_noise, concurrence_noisy_closed, noisy_reduced_kernel, noisy_two_mode_density
from ecswigner.phasespace import default_grid, integrate_grid, kernel_peaks, peak_separation, reduce_to_kernel, wigner_grid

FIG2_BETAS = [2 + 0.5 * k for k in range(9)]


def record(key, passed, detail):
    ACCEPTANCE[key] = (bool(passed), detail)
    assert passed, detail


def test_criterion_1_qubit_concurrence():
    t0 = time.perf_counter()
    vals = np.arange(0, 4.01, 0.5)
    worst = 0.0
    for a, b in itertools.permutations(vals, 2):
        pipe = concurrence_pure_2x2(recast_qubit(build_qubit_ecs(a, b, 1)))
        closed = (1 - math.exp(-(a - b) ** 2)) / (1 + math.exp(-(a - b) ** 2))
        worst = max(worst, abs(pipe - closed), abs(concurrence_closed_qubit(abs(a - b)) - closed))
    dt = time.perf_counter() - t0
    record(1, worst < 1e-10 and dt < 1, f"max deviation {worst:.2e}, {dt:.3f} s")


def test_criterion_2_qutrit_concurrence():
    t0 = time.perf_counter()
    cmax = concurrence_closed_qutrit(10, 10, 10)
    rng = np.random.default_rng(2024)
    worst = 0.0
    done = 0
    while done < 20:
        a, b, c = rng.uniform(0, 8, 3)
        if min(abs(a - b), abs(a - c), abs(b - c)) < 0.1:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearDegenerateWarning)
            pipe = concurrence_vector_norm(recast_qutrit(build_qutrit_ecs(a, b, c)))
        worst = max(worst, abs(pipe - concurrence_closed_qutrit(SeparationParams.from_amplitudes(a, b, c))))
        done += 1
    dt = time.perf_counter() - t0
    ok = abs(cmax - 1.154) < 1e-3 and worst < 1e-10 and dt < 5
    record(2, ok, f"C_max {cmax:.6f}, pipeline deviation {worst:.2e}, {dt:.3f} s")


def test_criterion_3_wigner_oracle():
    t0 = time.perf_counter()
    results = [verify.wigner_oracle_check(name, build(), closed, points=21) for name, (build, closed) in verify.WIGNER_CASES.items()]
    dt = time.perf_counter() - t0
    worst = max(r.deviation for r in results)
    record(3, worst < 1e-8 and dt < 120, f"max deviation {worst:.2e} over {len(results)} states, {dt:.1f} s")


def test_criterion_4_peak_phenomenology():
    t0 = time.perf_counter()
    counts = {b: len(kernel_peaks(reduce_to_kernel(build_qubit_ecs(2, b, 1)))) for b in (2, 4.5)}
    seps = [peak_separation(kernel_peaks(reduce_to_kernel(build_qubit_ecs(2, b, 1)))) for b in FIG2_BETAS]
    dt = time.perf_counter() - t0
    mono = all(s2 >= s1 for s1, s2 in zip(seps, seps[1:]))
    ok = counts[2] == 1 and counts[4.5] == 2 and mono and dt < 10
    record(4, ok, f"peaks {counts[2]} at beta=2, {counts[4.5]} at beta=4.5, separation monotone {mono}, {dt:.3f} s")


def test_criterion_5_protocol_weights():
    res = run_cavity_protocol(ProtocolConfig(OPTIMAL_EPSILONS, 1.0))
    terms = sorted(res.state.terms, key=lambda t: -t.amp.real)
    w = [abs(t.coeff) / abs(terms[0].coeff) for t in terms]
    ok = len(w) == 3 and abs(w[1] - 1.350) < 1e-3 and abs(w[2] - 1.000) < 2e-4
    record(5, ok, "weights (" + ", ".join(f"{x:.6f}" for x in w) + ")")


def test_criterion_6_noise_equivalence():
    worst = 0.0
    for a, b in itertools.permutations((1, 2, 3, 4), 2):
        p = math.exp(-0.5 * (a - b) ** 2)
        for k in range(1, 10):
            eta = k / 10
            c_w = concurrence_wootters(noisy_two_mode_density(a, b, eta))
            worst = max(worst, abs(c_w - p * p * (p ** (-2 * eta) - 1) / (1 + p * p)))
    one = max(
        abs(concurrence_wootters(noisy_two_mode_density(a, b, 1.0)) - concurrence_closed_qubit(abs(a - b)))
        for a, b in itertools.permutations((1, 2, 3, 4), 2)
    )
    zero = [concurrence_wootters(noisy_two_mode_density(a, b, 0.0)) for a, b in itertools.permutations((1, 2, 3, 4), 2)]
    ok = worst < 1e-6 and one < 1e-9 and all(z == 0 for z in zero)
    record(6, ok, f"deviation {worst:.2e}, eta=1 deviation {one:.2e}, eta=0 exact zero {all(z == 0 for z in zero)}")


def test_criterion_7_noise_phenomenology():
    etas = (0, 0.25, 0.5, 0.75, 1)
    p = math.exp(-0.5 * 4)
    conc = [concurrence_noisy_closed(p, e) for e in etas]
    seps = [peak_separation(kernel_peaks(noisy_reduced_kernel(apply_noise(4, 6, e)))) for e in etas]
    ok = all(b >= a for a, b in zip(conc, conc[1:])) and all(b >= a for a, b in zip(seps, seps[1:])) and seps[0] == 0
    record(7, ok, "separations (" + ", ".join(f"{s:.4f}" for s in seps) + ")")


def _sanity_states():
    yield "qubit(2,4)", build_qubit_ecs(2, 4, 1)
    yield "qutrit(0,3,8)", build_qutrit_ecs(0, 3, 8)
    yield "qutrit-qed(2,7)", verify.WIGNER_CASES["qutrit-qed(2,7)"][0]()
    for b in FIG2_BETAS:
        yield f"qubit(2,{b})", build_qubit_ecs(2, b, 1)


def test_criterion_8_quasi_probability():
    worst_int, worst_min, bad = 0.0, 0.0, []
    for name, state in _sanity_states():
        kernel = reduce_to_kernel(state)
        grid = wigner_grid(kernel, default_grid(kernel.amplitudes))
        dev = abs(integrate_grid(grid) - 1)
        lo = grid.min_value()
        worst_int = max(worst_int, dev)
        worst_min = min(worst_min, lo)
        if dev > 1e-5 or lo < -1e-9:
            bad.append(name)
    record(8, not bad, f"integral deviation {worst_int:.2e}, min value {worst_min:.2e}, failing {bad}")


def test_criterion_9_generation_path():
    r = verify.generation_check(lam=math.pi / 4, alpha=2, beta=4)
    record(9, r.deviation <= 1e-8, f"1 - fidelity {r.deviation:.2e}")
