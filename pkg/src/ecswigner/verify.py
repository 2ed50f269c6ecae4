"""Cross-checks of every closed form against the truncated Fock-space oracle.

Each check returns a :class:`CheckResult`; :func:`run_all` collects them.
The oracle states are embedded at :func:`~ecswigner.fock.oracle_ncut` of the
largest amplitude unless a cutoff is forced, in which case an inadequate
cutoff shows up as a failed ``truncation`` check and degraded deviations.
"""

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import fock
from .coherent import (
    apply_beamsplitter,
    apply_displacement,
    build_qubit_ecs,
    build_qutrit_ecs,
    build_qutrit_qed,
    generate_superposition,
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
from .noise import apply_noise, concurrence_noisy_closed, noisy_reduced_kernel, noisy_two_mode_density
from .phasespace import default_grid, kernel_density_matrix, reduce_to_kernel, wigner_closed_qed, wigner_closed_qubit, wigner_closed_qutrit, wigner_kernel

__all__ = [
    "CheckResult",
    "WIGNER_CASES",
    "wigner_oracle_check",
    "qubit_concurrence_check",
    "qutrit_concurrence_check",
    "noise_concurrence_check",
    "noise_kernel_check",
    "generation_check",
    "truncation_check",
    "run_all",
]

WIGNER_TOL = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tol: float
    passed: bool
    detail: str = ""


def _result(name, dev, tol, detail=""):
    dev = float(dev)
    return CheckResult(name, dev, tol, bool(dev < tol), detail)


# name -> (state builder, closed form taking gamma)
WIGNER_CASES = {
    "qubit(2,4,mu=1)": (lambda: build_qubit_ecs(2, 4, 1), lambda g: wigner_closed_qubit(g, 2, 4, 1)),
    "qutrit(0,3,8,mu=1,1)": (lambda: build_qutrit_ecs(0, 3, 8), lambda g: wigner_closed_qutrit(g, 0, 3, 8)),
    "qutrit-qed(2,7)": (lambda: build_qutrit_qed(2, 7), lambda g: wigner_closed_qed(g, 2, 7)),
}


def _amp_max(state):
    return max(abs(complex(a)) for a in list(state.amps1) + list(state.amps2))


def oracle_mode1_density(state, n_cut=None):
    """Mode-1 density matrix of a two-mode state computed in Fock space."""
    n = n_cut or fock.oracle_ncut(_amp_max(state))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", fock.TruncationWarning)
        psi = fock.two_mode_from_terms(state, n)
    return fock.reduced_density_pure(psi, n)


def wigner_oracle_check(name, state, closed, points=21, n_cut=None):
    """Max |closed form - displaced-parity oracle| and |closed form - kernel engine| on a grid."""
    kernel = reduce_to_kernel(state)
    spec = default_grid(kernel.amplitudes)
    xs = np.linspace(spec.x_min, spec.x_max, points)
    ys = np.linspace(spec.y_min, spec.y_max, points)
    gam = xs[None, :] + 1j * ys[:, None]
    cf = closed(gam)
    rho = oracle_mode1_density(state, n_cut)
    orc = fock.wigner_oracle_grid(rho, xs, ys, state.amps1)
    engine = wigner_kernel(kernel, gam)
    dev = max(np.abs(cf - orc).max(), np.abs(cf - engine).max())
    return _result(f"wigner {name}", dev, WIGNER_TOL, f"n_cut={rho.shape[0]}, {points}x{points} grid")


def qubit_concurrence_check(values=None, tol=1e-10):
    """Closed form in the separation against the recast pipeline, plus the purity oracle."""
    values = np.arange(0.0, 4.01, 0.5) if values is None else values
    worst = 0.0
    for a, b in itertools.permutations(values, 2):
        mat = recast_qubit(build_qubit_ecs(a, b))
        c_pipe = concurrence_pure_2x2(mat)
        # pure-state identity C = sqrt(2 (1 - Tr rho_A^2))
        rho_a = mat @ mat.conj().T
        c_purity = math.sqrt(max(0.0, 2.0 * (1.0 - np.trace(rho_a @ rho_a).real)))
        c_closed = concurrence_closed_qubit(abs(a - b))
        worst = max(worst, abs(c_closed - c_pipe), abs(c_closed - c_purity))
    return _result("concurrence qubit", worst, tol)


def qutrit_concurrence_check(n_triples=20, seed=7, tol=1e-10):
    """Closed form against the concurrence vector for random distinct triples in [0, 8]."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < n_triples:
        a, b, c = rng.uniform(0.0, 8.0, 3)
        if min(abs(a - b), abs(a - c), abs(b - c)) < 0.3:
            continue
        mat = recast_qutrit(build_qutrit_ecs(a, b, c))
        rho_a = mat @ mat.conj().T
        c_purity = math.sqrt(max(0.0, 2.0 * (1.0 - np.trace(rho_a @ rho_a).real)))
        c_closed = concurrence_closed_qutrit(SeparationParams.from_amplitudes(a, b, c))
        worst = max(worst, abs(c_closed - concurrence_vector_norm(mat)), abs(c_closed - c_purity))
        done += 1
    return _result("concurrence qutrit", worst, tol, f"{n_triples} random triples, seed {seed}")


def noise_concurrence_check(values=(1, 2, 3, 4), etas=None, tol=1e-6):
    """Wootters concurrence of the lossy two-qubit state against the closed form."""
    etas = np.round(np.arange(0.1, 0.91, 0.1), 10) if etas is None else etas
    worst = 0.0
    for a, b in itertools.permutations(values, 2):
        for eta in etas:
            p = math.exp(-0.5 * (a - b) ** 2)
            c_w = concurrence_wootters(noisy_two_mode_density(a, b, eta))
            worst = max(worst, abs(c_w - concurrence_noisy_closed(p, eta)))
    return _result("concurrence noisy", worst, tol)


def noise_kernel_check(alpha=2.0, beta=4.0, eta=0.5, tol=1e-9):
    """Reduced lossy state from coherent algebra against a Fock-space loss channel.

    The oracle traces out mode 2 of the noiseless ECS and sends mode 1
    through a beam splitter against vacuum; tracing out mode 2 first is
    legitimate because loss on mode 2 does not change the mode-1 marginal.
    """
    state = build_qubit_ecs(alpha, beta)
    n = fock.oracle_ncut(max(abs(alpha), abs(beta)))
    rho = oracle_mode1_density(state, n)
    lossy = fock.loss_channel(rho, eta)
    kernel = noisy_reduced_kernel(apply_noise(alpha, beta, eta))
    dev = np.abs(kernel_density_matrix(kernel, n) - lossy).max()
    return _result("noisy kernel vs loss channel", dev, tol, f"eta={eta}, n_cut={n}")


def generation_check(lam=math.pi / 4, alpha=2.0, beta=4.0, shift=0.5, tol=1e-8):
    """Fidelity gap between the coherent-algebra generation path and its Fock-space counterpart.

    Library path: superposition, displacement by ``shift``, vacuum in mode 2,
    50-50 splitter.  Oracle path: ``D(shift) D(alpha) exp(i lam D(beta-alpha) P) |0>``
    followed by the Fock-space splitter.
    """
    sup = generate_superposition(lam, alpha, beta)
    lib = apply_beamsplitter(with_vacuum(apply_displacement(sup, shift)), math.pi / 4)
    amp = max(abs(complex(alpha)), abs(complex(beta))) + abs(shift)
    n = fock.oracle_ncut(amp)
    vac = np.zeros(n, dtype=complex)
    vac[0] = 1.0
    u = expm(1j * lam * fock.displacement_matrix(beta - alpha, n) @ fock.parity_matrix(n))
    one = fock.displacement_matrix(shift, n) @ fock.displacement_matrix(alpha, n) @ (u @ vac)
    orc = fock.beamsplitter_apply(math.pi / 4, np.kron(one, vac), n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", fock.TruncationWarning)
        vec = fock.two_mode_from_terms(lib, n)
    gap = 1.0 - fock.fidelity(vec, orc / np.linalg.norm(orc))
    return _result("generation path", abs(gap), tol, f"lambda={lam:.6g}, n_cut={n}")


def truncation_check(n_cut, amp_max):
    """Fails when ``n_cut`` is below the adequacy rule; reports the coherent tail mass."""
    need = fock.adequate_ncut(amp_max)
    k = np.arange(n_cut)
    a2 = abs(amp_max) ** 2
    # Poisson mass captured by the first n_cut levels
    logp = -a2 + k * math.log(a2) - np.array([math.lgamma(j + 1) for j in k]) if a2 > 0 else np.where(k == 0, 0.0, -np.inf)
    tail = max(0.0, 1.0 - float(np.exp(logp).sum()))
    return CheckResult(
        f"truncation n_cut={n_cut} |a|={abs(amp_max):.4g}",
        tail,
        0.0,
        n_cut >= need,
        f"adequacy rule needs {need}; tail mass {tail:.3g}",
    )


def run_all(n_cut=None, points=21):
    """Run every check; ``n_cut`` forces the Wigner oracle cutoff."""
    results = []
    for name, (build, closed) in WIGNER_CASES.items():
        state = build()
        if n_cut is not None:
            results.append(truncation_check(n_cut, _amp_max(state)))
        results.append(wigner_oracle_check(name, state, closed, points, n_cut))
    results.append(qubit_concurrence_check())
    results.append(qutrit_concurrence_check())
    results.append(_result("qutrit maximum", abs(concurrence_closed_qutrit(10, 10, 10) - 1.154), 1e-3))
    results.append(noise_concurrence_check())
    results.append(noise_kernel_check())
    results.append(generation_check())
    return results
