"""Truncated Fock-space numerics.

Everything here works on plain numpy arrays in the photon-number basis and
is deliberately independent of the coherent-state algebra in
:mod:`ecswigner.coherent`.  It serves as the brute-force reference that the
closed forms elsewhere in the package are checked against.

Two-mode arrays use the composite index ``k = n1 * n_cut + n2`` (mode 1 major).
"""

import math
import warnings
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

__all__ = [
    "TruncationWarning",
    "TruncationError",
    "adequate_ncut",
    "annihilation",
    "coherent_fock",
    "displacement_matrix",
    "parity_matrix",
    "beamsplitter_matrix",
    "beamsplitter_apply",
    "wigner_displaced_parity",
    "wigner_oracle_grid",
    "oracle_ncut",
    "grid_reach",
    "partial_trace_mode2",
    "reduced_density_pure",
    "mode_from_terms",
    "two_mode_from_terms",
    "loss_channel",
    "fidelity",
]


class TruncationWarning(UserWarning):
    """Fock cutoff is below the adequacy rule for the amplitudes involved."""


class TruncationError(ValueError):
    pass


def adequate_ncut(amp_max):
    """Smallest cutoff that keeps the Poisson tail of ``|amp_max>`` below ~1e-12."""
    a = abs(amp_max)
    return int(math.ceil(a * a + 6.0 * a + 12.0))


def _check_cutoff(amp_max, n_cut, strict):
    need = adequate_ncut(amp_max)
    if n_cut < need:
        msg = f"n_cut={n_cut} is below the adequacy rule ({need}) for |amplitude|={abs(amp_max):.4g}"
        if strict:
            raise TruncationError(msg)
        warnings.warn(msg, TruncationWarning, stacklevel=3)
        return False
    return True


def _finite(z, name):
    if not np.isfinite(complex(z)):
        raise ValueError(f"{name} must be finite, got {z!r}")


def annihilation(n_cut):
    return np.diag(np.sqrt(np.arange(1, n_cut, dtype=float)), k=1)


def coherent_fock(alpha, n_cut, strict=False):
    """Number-basis amplitudes of the coherent state ``|alpha>``.

    The vector is not renormalized, so any truncation loss stays visible in
    its norm.  A :class:`TruncationWarning` is emitted (or
    :class:`TruncationError` raised when ``strict``) if ``n_cut`` is below
    :func:`adequate_ncut`.
    """
    _finite(alpha, "alpha")
    if n_cut < 1:
        raise ValueError("n_cut must be >= 1")
    alpha = complex(alpha)
    _check_cutoff(alpha, n_cut, strict)
    vec = np.empty(n_cut, dtype=complex)
    vec[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_cut):
        vec[n] = vec[n - 1] * alpha / math.sqrt(n)
    return vec


@lru_cache(maxsize=32)
def _quadrature_eigh(n_cut):
    # i(a^dag - a) is Hermitian; its eigenbasis diagonalises every real-axis displacement
    a = annihilation(n_cut)
    h = 1j * (a.T - a)
    evals, evecs = np.linalg.eigh(h)
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return evals, evecs


def displacement_matrix(beta, n_cut):
    """Truncated ``D(beta) = exp(beta a^dag - beta* a)``.

    Computed by rotating ``exp(|beta| (a^dag - a))`` with the phase operator
    ``exp(i arg(beta) a^dag a)``; the real-axis exponential comes from a
    cached eigendecomposition of the Hermitian quadrature ``i(a^dag - a)``.
    """
    _finite(beta, "beta")
    if n_cut < 2:
        raise ValueError("n_cut must be >= 2")
    beta = complex(beta)
    r, theta = abs(beta), np.angle(beta)
    if r == 0.0:
        return np.eye(n_cut, dtype=complex)
    evals, evecs = _quadrature_eigh(n_cut)
    # a^dag - a = -i h  =>  exp(r (a^dag - a)) = V exp(-i r evals) V^dag
    core = (evecs * np.exp(-1j * r * evals)) @ evecs.conj().T
    phase = np.exp(1j * theta * np.arange(n_cut))
    return phase[:, None] * core * phase.conj()[None, :]


def parity_matrix(n_cut):
    if n_cut < 1:
        raise ValueError("n_cut must be >= 1")
    return np.diag((-1.0) ** np.arange(n_cut)).astype(complex)


@lru_cache(maxsize=16)
def _bs_blocks(theta, n_cut):
    """Per-total-photon-number blocks of the beam-splitter unitary.

    The generator conserves n1 + n2 even after truncation, so each block
    ``{(n1, n2): n1 + n2 = N}`` can be exponentiated on its own.
    """
    blocks = []
    for total in range(2 * n_cut - 1):
        n1 = np.arange(max(0, total - n_cut + 1), min(total, n_cut - 1) + 1)
        n2 = total - n1
        m = len(n1)
        gen = np.zeros((m, m))
        # theta (a b^dag - a^dag b): |n1, n2> -> |n1 - 1, n2 + 1> with sqrt(n1 (n2 + 1))
        for j in range(m - 1):
            # basis index j has (n1[j], n2[j]); j + 1 has one more photon in mode 1
            amp = math.sqrt(n1[j + 1] * (n2[j + 1] + 1))
            gen[j, j + 1] += amp
            gen[j + 1, j] -= amp
        idx = n1 * n_cut + n2
        blocks.append((idx, expm(theta * gen)))
    return tuple(blocks)


def beamsplitter_matrix(theta, n_cut):
    """Two-mode beam-splitter unitary on the truncated ``n_cut**2`` space.

    The sign of the generator is chosen so that ``|alpha>|beta>`` maps to
    ``|alpha cos(theta) - beta sin(theta)>|alpha sin(theta) + beta cos(theta)>``;
    in particular ``B(pi/4)|a>|0> = |a/sqrt2>|a/sqrt2>``.
    """
    if n_cut < 2:
        raise ValueError("n_cut must be >= 2")
    dim = n_cut * n_cut
    u = np.zeros((dim, dim))
    for idx, block in _bs_blocks(float(theta), n_cut):
        u[np.ix_(idx, idx)] = block
    return u


def beamsplitter_apply(theta, psi, n_cut):
    """Apply the beam splitter to a two-mode vector without forming the full matrix."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (n_cut * n_cut,):
        raise ValueError(f"expected a vector of length {n_cut * n_cut}, got shape {psi.shape}")
    out = np.zeros_like(psi)
    for idx, block in _bs_blocks(float(theta), n_cut):
        out[idx] = block @ psi[idx]
    return out


def oracle_ncut(amp_max):
    """Cutoff used by the oracle: the adequacy rule evaluated one unit further out.

    The rule bounds the truncated probability mass near 1e-12, but Wigner
    values are linear in the truncated amplitude (~1e-6), so the extra unit
    keeps oracle values accurate to well below 1e-8.
    """
    return adequate_ncut(abs(amp_max) + 1.0)


def _displace_vectors(beta, vecs):
    """``D(beta) @ vecs`` through the cached quadrature eigenbasis."""
    n = vecs.shape[0]
    beta = complex(beta)
    r, theta = abs(beta), np.angle(beta)
    if r == 0.0:
        return vecs
    evals, evecs = _quadrature_eigh(n)
    phase = np.exp(1j * theta * np.arange(n))[:, None]
    w = evecs.conj().T @ (phase.conj() * vecs)
    w = evecs @ (np.exp(-1j * r * evals)[:, None] * w)
    return phase * w


def _parity_values(rho, gammas, n_work):
    rho = np.asarray(rho, dtype=complex)
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-6:
        raise ValueError(f"density operator trace is {tr.real:.8g}, expected 1")
    n = max(n_work or 0, rho.shape[0])
    evals, evecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    # rho = sum_k lam_k |v_k><v_k|; dropped components change W by < n * 1e-16
    keep = np.abs(evals) > 1e-16
    lam = evals[keep]
    vecs = np.zeros((n, int(keep.sum())), dtype=complex)
    vecs[: rho.shape[0]] = evecs[:, keep]
    sign = (-1.0) ** np.arange(n)
    out = np.empty(len(gammas))
    for i, g in enumerate(gammas):
        # Tr[rho D P D^dag] = sum_k lam_k <u_k|P|u_k>,  u_k = D(-gamma) v_k
        u = _displace_vectors(-complex(g), vecs)
        out[i] = (2.0 / np.pi) * float(lam @ (sign @ (np.abs(u) ** 2)))
    return out


def wigner_displaced_parity(rho, gamma, n_work=None):
    """Wigner value ``(2/pi) Tr[rho D(gamma) P D(gamma)^dag]``.

    ``n_work`` pads ``rho`` into a larger space before displacing; it must be
    large enough to hold the state shifted by ``-gamma``.
    """
    return float(_parity_values(rho, [gamma], n_work)[0])


def grid_reach(amplitudes, xs, ys):
    """Largest coherent amplitude met while displacing ``amplitudes`` to every grid point."""
    amps = np.asarray(list(amplitudes), dtype=complex)
    corners = np.array([complex(x, y) for x in (min(xs), max(xs)) for y in (min(ys), max(ys))])
    return float(max(np.abs(amps).max(), np.abs(amps[:, None] - corners[None, :]).max()))


def wigner_oracle_grid(rho, xs, ys, amplitudes):
    """Displaced-parity Wigner values on the grid ``x + iy`` (rows index y).

    ``amplitudes`` are the coherent amplitudes present in ``rho``; they size
    the working cutoff for the farthest displacement the grid needs.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    n_work = oracle_ncut(grid_reach(amplitudes, xs, ys))
    gammas = (xs[None, :] + 1j * ys[:, None]).ravel()
    return _parity_values(rho, gammas, n_work).reshape(len(ys), len(xs))


def partial_trace_mode2(rho12):
    rho12 = np.asarray(rho12)
    dim = rho12.shape[0]
    n = int(round(math.sqrt(dim)))
    if rho12.ndim != 2 or rho12.shape != (dim, dim) or n * n != dim:
        raise ValueError(f"expected a square two-mode operator of size n_cut**2, got {rho12.shape}")
    return np.einsum("ikjk->ij", rho12.reshape(n, n, n, n))


def reduced_density_pure(psi, n_cut):
    """Mode-1 reduced density of a pure two-mode vector, without forming ``|psi><psi|``."""
    m = np.asarray(psi).reshape(n_cut, n_cut)
    return m @ m.conj().T


def _terms_of(state):
    return state.terms if hasattr(state, "terms") else state


def mode_from_terms(terms, n_cut, normalize=True, strict=False):
    """Embed a single-mode list of ``(coeff, amp)`` pairs."""
    terms = list(_terms_of(terms))
    amp_max = max(abs(complex(a)) for _, a in terms)
    _check_cutoff(amp_max, n_cut, strict)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        vec = sum(complex(c) * coherent_fock(a, n_cut) for c, a in terms)
    if normalize:
        vec = vec / np.linalg.norm(vec)
    return vec


def two_mode_from_terms(state, n_cut, normalize=True, strict=False):
    """Embed ``sum_i c_i |a_i>|b_i>`` as a vector of length ``n_cut**2``.

    ``state`` is either a :class:`~ecswigner.coherent.TwoModeECS` or any
    iterable of ``(coeff, amp1, amp2)`` triples.
    """
    terms = list(_terms_of(state))
    if not terms:
        raise ValueError("state has no terms")
    amp_max = max(max(abs(complex(a)), abs(complex(b))) for _, a, b in terms)
    _check_cutoff(amp_max, n_cut, strict)
    vec = np.zeros(n_cut * n_cut, dtype=complex)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for c, a, b in terms:
            vec += complex(c) * np.kron(coherent_fock(a, n_cut), coherent_fock(b, n_cut))
    if normalize:
        vec = vec / np.linalg.norm(vec)
    return vec


def loss_channel(rho, eta):
    """Photon loss realised as a beam splitter against a vacuum ancilla.

    The splitter angle is ``arccos(sqrt(eta))`` so a coherent amplitude ``a``
    leaves the system as ``sqrt(eta) a``; the ancilla is traced out.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    rho = np.asarray(rho, dtype=complex)
    n = rho.shape[0]
    theta = float(np.arccos(np.sqrt(eta)))
    evals, evecs = np.linalg.eigh(rho)
    vac = np.zeros(n)
    vac[0] = 1.0
    out = np.zeros_like(rho)
    for lam, v in zip(evals, evecs.T):
        if abs(lam) < 1e-15:
            continue
        psi = beamsplitter_apply(theta, np.kron(v, vac), n).reshape(n, n)
        out += lam * psi @ psi.conj().T
    return out


def fidelity(psi, phi):
    """``|<psi|phi>|^2`` for normalized vectors."""
    return float(abs(np.vdot(psi, phi)) ** 2)
