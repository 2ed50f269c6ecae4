import math
import warnings

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ecswigner import fock
from ecswigner.coherent import (
    ModeSuperposition,
    TwoModeECS,
    apply_beamsplitter,
    build_qubit_ecs,
    build_qutrit_ecs,
    generate_superposition,
    gram_matrix,
    overlap,
    with_vacuum,
)
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
from ecswigner.phasespace import kernel_peaks, peak_separation, reduce_to_kernel, wigner_kernel

FAST = settings(max_examples=40, deadline=None)

coord = st.floats(-3.5, 3.5, allow_nan=False)
amp = st.builds(complex, coord, coord)
real_amp = st.floats(0.0, 4.0, allow_nan=False)
weight = st.floats(0.2, 2.0, allow_nan=False)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@FAST
@given(amp, amp)
def test_overlap_matches_fock(a, b):
    assume(abs(a) <= 5 and abs(b) <= 5)
    n = fock.adequate_ncut(max(abs(a), abs(b)))
    ref = np.vdot(fock.coherent_fock(a, n), fock.coherent_fock(b, n))
    assert abs(overlap(a, b) - ref) < 1e-10


@FAST
@given(amp, amp)
def test_displacement_composition(a, b):
    assume(abs(a) <= 2.5 and abs(b) <= 2.5)
    n = fock.oracle_ncut(abs(a) + abs(b)) + 30
    left = fock.displacement_matrix(a, n) @ fock.displacement_matrix(b, n)
    right = np.exp(1j * (a * np.conj(b)).imag) * fock.displacement_matrix(a + b, n)
    # truncation only spoils entries near the cutoff
    assert np.abs(left - right)[:20, :20].max() < 1e-9


@FAST
@given(amp, amp, st.floats(0, 2 * math.pi))
def test_beamsplitter_coherent_covariance(a, b, theta):
    assume(abs(a) <= 2 and abs(b) <= 2)
    n = fock.adequate_ncut(abs(a) + abs(b))
    psi = np.kron(fock.coherent_fock(a, n), fock.coherent_fock(b, n))
    out = fock.beamsplitter_apply(theta, psi, n)
    c, s = math.cos(theta), math.sin(theta)
    want = np.kron(fock.coherent_fock(a * c - b * s, n), fock.coherent_fock(a * s + b * c, n))
    assert fock.fidelity(out, want) > 1 - 1e-8


@settings(deadline=None)
@given(
    st.sampled_from([k * math.pi / 8 for k in range(5)]),
    st.sampled_from([1, -1, 2, -2, 2j, -2j]),
    st.sampled_from([1, -1, 2, -2, 2j, -2j]),
)
def test_generate_superposition_normalized(lam, a, b):
    s = generate_superposition(lam, a, b)
    assert abs(s.norm_sq() - 1) < 1e-12


@FAST
@given(st.lists(st.tuples(st.builds(complex, weight, coord), amp, amp), min_size=1, max_size=4), st.floats(-4, 4))
def test_beamsplitter_preserves_gram(terms, theta):
    state = TwoModeECS(tuple((c, a, b) for c, a, b in terms))
    out = apply_beamsplitter(state, theta)
    g_in = gram_matrix(state.amps1) * gram_matrix(state.amps2)
    g_out = gram_matrix(out.amps1) * gram_matrix(out.amps2)
    assert np.abs(g_in - g_out).max() < 1e-12


@FAST
@given(real_amp, real_amp)
def test_qubit_pipeline_equivalence(a, b):
    assume(abs(a - b) > 0.05)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearDegenerateWarning)
        c = concurrence_pure_2x2(recast_qubit(build_qubit_ecs(a, b)))
    assert abs(c - concurrence_closed_qubit(abs(a - b))) < 1e-10


@FAST
@given(st.floats(0, 8), st.floats(0, 8), st.floats(0, 8))
def test_qutrit_pipeline_equivalence(a, b, c):
    assume(min(abs(a - b), abs(a - c), abs(b - c)) > 0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearDegenerateWarning)
        m = recast_qutrit(build_qutrit_ecs(a, b, c))
    closed = concurrence_closed_qutrit(SeparationParams.from_amplitudes(a, b, c))
    assert abs(concurrence_vector_norm(m) - closed) < 1e-10


@given(st.lists(st.floats(1e-100, 10), min_size=2, max_size=10, unique=True))
def test_closed_qubit_monotone(deltas):
    deltas = sorted(deltas)
    # neighbours must differ by more than the resolution of the output
    assume(all(d2 > d1 * (1 + 1e-6) for d1, d2 in zip(deltas, deltas[1:])))
    vals = [concurrence_closed_qubit(d) for d in deltas]
    # strictly increasing until double precision saturates at 1
    assert all(v2 > v1 or v1 == 1.0 for v1, v2 in zip(vals, vals[1:]))


@FAST
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_vector_norm_local_unitary_invariance(seed, d):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    a /= np.linalg.norm(a)
    u, v = random_unitary(rng, d), random_unitary(rng, d)
    assert abs(concurrence_vector_norm(u @ a @ v.T) - concurrence_vector_norm(a)) < 1e-10


@FAST
@given(amp, amp, st.builds(complex, weight, st.floats(-1, 1)))
def test_wootters_pure_recast(a, b, mu):
    assume(abs(a - b) > 0.3)
    m = recast_qubit(build_qubit_ecs(a, b, mu))
    v = m.reshape(4)
    assert abs(concurrence_wootters(np.outer(v, v.conj())) - concurrence_pure_2x2(m)) < 1e-9


@FAST
@given(st.lists(st.tuples(st.builds(complex, weight, st.floats(-1, 1)), amp, amp), min_size=1, max_size=3), amp)
def test_kernel_trace_hermitian_and_bound(terms, g):
    state = TwoModeECS(tuple(terms)).normalize()
    k = reduce_to_kernel(state)
    assert abs(k.trace() - 1) < 1e-10
    assert k.is_hermitian(tol=1e-10)
    assert abs(wigner_kernel(k, g)) <= 2 / math.pi + 1e-9


@FAST
@given(real_amp, real_amp, real_amp, weight, weight, coord, coord)
def test_real_states_nonnegative_and_symmetric(a, b, c, mu1, mu2, x, y):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        k = reduce_to_kernel(build_qutrit_ecs(a, b, c, mu1, mu2))
    w = wigner_kernel(k, complex(x, y))
    assert w >= -1e-9
    assert w == wigner_kernel(k, complex(x, -y))


@FAST
@given(st.floats(3, 6), st.floats(-3, 3), st.floats(0, 2))
def test_separation_translation_invariant(delta, shift, base):
    s1 = peak_separation(kernel_peaks(reduce_to_kernel(build_qubit_ecs(base, base + delta))))
    s2 = peak_separation(kernel_peaks(reduce_to_kernel(build_qubit_ecs(base + shift, base + shift + delta))))
    assert abs(s1 - s2) < 1e-6


@FAST
@given(st.floats(0.05, 5))
def test_noisy_concurrence_monotone_in_eta(delta):
    p = math.exp(-0.5 * delta * delta)
    vals = [concurrence_noisy_closed(p, k * 0.05) for k in range(21)]
    assert all(v2 >= v1 - 1e-15 for v1, v2 in zip(vals, vals[1:]))


@FAST
@given(st.floats(0, 5), st.floats(0, 5), st.floats(0.01, 1))
def test_noisy_wootters_matches_closed(a, b, eta):
    assume(abs(a - b) > 0.2)
    p = math.exp(-0.5 * (a - b) ** 2)
    c = concurrence_wootters(noisy_two_mode_density(a, b, eta))
    assert abs(c - concurrence_noisy_closed(p, eta)) < 1e-6


@FAST
@given(real_amp, real_amp, st.floats(0, 1), weight)
def test_noisy_kernel_trace(a, b, eta, mu):
    k = noisy_reduced_kernel(apply_noise(a, b, eta, mu))
    assert abs(k.trace() - 1) < 1e-12
    assert k.is_hermitian()


@FAST
@given(st.lists(st.tuples(st.floats(-2, 2), amp), min_size=1, max_size=3))
def test_mode_superposition_normalize(terms):
    s = ModeSuperposition(tuple(terms))
    assume(s.terms and s.norm_sq() > 1e-6)
    assert abs(s.normalize().norm_sq() - 1) < 1e-10


@FAST
@given(amp)
def test_with_vacuum_beamsplitter_balanced(a):
    s = ModeSuperposition(((1.0, a),))
    out = apply_beamsplitter(with_vacuum(s), math.pi / 4)
    t = out.terms[0]
    assert abs(t.amp1 - a / math.sqrt(2)) < 1e-15 and abs(t.amp2 - a / math.sqrt(2)) < 1e-15
