import math
import warnings

import numpy as np
import pytest

from ecswigner import fock
from ecswigner.coherent import build_qubit_ecs, build_qutrit_qed, normalization


def test_adequate_ncut_rule():
    assert fock.adequate_ncut(0) == 12
    assert fock.adequate_ncut(4) == 52
    assert fock.adequate_ncut(-4) == 52
    assert fock.oracle_ncut(4) == fock.adequate_ncut(5)


def test_coherent_fock_vacuum():
    v = fock.coherent_fock(0, 16)
    e0 = np.zeros(16)
    e0[0] = 1
    assert np.allclose(v, e0, atol=0)


def test_coherent_fock_norm():
    v = fock.coherent_fock(2, 64)
    assert abs(np.vdot(v, v).real - 1) < 1e-10


def test_coherent_fock_overlap_matches_closed_form():
    a = fock.coherent_fock(2, 64)
    b = fock.coherent_fock(4, 64)
    assert abs(np.vdot(a, b) - math.exp(-2)) < 1e-10
    assert abs(np.vdot(a, b) - 0.1353353) < 1e-7


def test_coherent_fock_warns_or_raises_below_rule():
    with pytest.warns(fock.TruncationWarning):
        fock.coherent_fock(4, 8)
    with pytest.raises(fock.TruncationError):
        fock.coherent_fock(4, 8, strict=True)


def test_displacement_identity_and_vacuum():
    assert np.allclose(fock.displacement_matrix(0, 20), np.eye(20), atol=1e-15)
    n = 64
    d = fock.displacement_matrix(3, n)
    vac = fock.coherent_fock(0, n)
    assert np.abs(d @ vac - fock.coherent_fock(3, n)).max() < 1e-9


def test_displacement_inverse_pair():
    n = 64
    beta = 1.2 - 0.7j
    prod = fock.displacement_matrix(beta, n) @ fock.displacement_matrix(-beta, n)
    assert np.abs(prod - np.eye(n)).max() < 1e-9


def test_displacement_matches_expm():
    from scipy.linalg import expm

    n = 40
    a = fock.annihilation(n)
    beta = 0.8 + 0.3j
    ref = expm(beta * a.conj().T - np.conj(beta) * a)
    assert np.abs(fock.displacement_matrix(beta, n) - ref).max() < 1e-11


def test_parity_two_levels():
    assert np.array_equal(fock.parity_matrix(2), np.diag([1.0, -1.0]))


def test_beamsplitter_identity():
    assert np.abs(fock.beamsplitter_matrix(0.0, 6) - np.eye(36)).max() < 1e-14


def test_beamsplitter_balanced_anchor():
    # |a>|0> -> |a/sqrt2>|a/sqrt2>
    n = fock.adequate_ncut(2)
    a = 2.0
    psi = np.kron(fock.coherent_fock(a, n), fock.coherent_fock(0, n))
    out = fock.beamsplitter_apply(math.pi / 4, psi, n)
    s = a / math.sqrt(2)
    want = np.kron(fock.coherent_fock(s, n), fock.coherent_fock(s, n))
    assert fock.fidelity(out, want) > 1 - 1e-8


def test_beamsplitter_matrix_agrees_with_apply():
    n = 6
    rng = np.random.default_rng(3)
    psi = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
    m = fock.beamsplitter_matrix(0.37, n)
    assert np.abs(m @ psi - fock.beamsplitter_apply(0.37, psi, n)).max() < 1e-12


def test_wigner_vacuum_and_coherent_peak():
    rho = np.zeros((16, 16))
    rho[0, 0] = 1
    assert abs(fock.wigner_displaced_parity(rho, 0) - 2 / math.pi) < 1e-12
    n = fock.oracle_ncut(2)
    v = fock.coherent_fock(2, n)
    rho = np.outer(v, v.conj())
    assert abs(fock.wigner_displaced_parity(rho, 2, n_work=fock.oracle_ncut(4)) - 2 / math.pi) < 1e-10


def test_wigner_rejects_untraced_operator():
    with pytest.raises(ValueError):
        fock.wigner_displaced_parity(np.eye(4), 0)


def test_partial_trace_product_state():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    sigma = np.diag([0.5, 0.3, 0.2, 0.0])
    assert np.abs(fock.partial_trace_mode2(np.kron(rho, sigma)) - rho).max() < 1e-14


def test_partial_trace_ecs_is_mixed():
    n = fock.adequate_ncut(4)
    psi = fock.two_mode_from_terms(build_qubit_ecs(2, 4), n)
    rho = fock.reduced_density_pure(psi, n)
    assert np.trace(rho @ rho).real < 1
    # oracle purity frozen from the Fock computation
    assert abs(np.trace(rho @ rho).real - 0.5353254124265844) < 1e-9


def test_partial_trace_separable_is_pure():
    n = fock.adequate_ncut(2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        psi = fock.two_mode_from_terms(build_qubit_ecs(2, 2), n)
    rho = fock.partial_trace_mode2(np.outer(psi, psi.conj()))
    assert abs(np.trace(rho @ rho).real - 1) < 1e-10


def test_reduced_density_pure_matches_partial_trace():
    n = 10
    rng = np.random.default_rng(1)
    psi = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
    psi /= np.linalg.norm(psi)
    full = fock.partial_trace_mode2(np.outer(psi, psi.conj()))
    assert np.abs(full - fock.reduced_density_pure(psi, n)).max() < 1e-14


def test_two_mode_single_term_is_product():
    n = 20
    psi = fock.two_mode_from_terms([(1.0, 1.0, 1.0)], n)
    want = np.kron(fock.coherent_fock(1.0, n), fock.coherent_fock(1.0, n))
    assert fock.fidelity(psi, want) > 1 - 1e-14


def test_two_mode_norm_consistency_qubit():
    n = fock.adequate_ncut(4)
    st = build_qubit_ecs(2, 4)
    raw = fock.two_mode_from_terms([(1.0, 2, 2), (1.0, 4, 4)], n, normalize=False)
    m2 = 2 + 2 * math.exp(-4)
    assert abs(np.vdot(raw, raw).real - m2) < 1e-8
    assert abs(normalization(st) - 1) < 1e-12


def test_two_mode_qed_state_normalized():
    st = build_qutrit_qed(2, 7)
    n = fock.adequate_ncut(max(abs(a) for a in st.amps1))
    psi = fock.two_mode_from_terms(st, n, normalize=False)
    assert abs(np.linalg.norm(psi) - 1) < 1e-8


def test_loss_channel_endpoints():
    n = 30
    v = fock.coherent_fock(1.5, n)
    rho = np.outer(v, v.conj())
    assert np.abs(fock.loss_channel(rho, 1.0) - rho).max() < 1e-12
    out = fock.loss_channel(rho, 0.0)
    assert abs(out[0, 0] - 1) < 1e-12


def test_loss_channel_shrinks_coherent_amplitude():
    n = 40
    v = fock.coherent_fock(2.0, n)
    out = fock.loss_channel(np.outer(v, v.conj()), 0.25)
    w = fock.coherent_fock(1.0, n)
    assert np.abs(out - np.outer(w, w.conj())).max() < 1e-10
