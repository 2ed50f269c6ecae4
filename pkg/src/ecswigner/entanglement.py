"""Qubit/qutrit recasting of entangled coherent states and concurrence measures."""

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .coherent import MERGE_TOL, gram_matrix, normalization, overlap

__all__ = [
    "DegenerateBasisError",
    "NearDegenerateWarning",
    "QubitBasisData",
    "QutritBasisData",
    "SeparationParams",
    "coherent_basis",
    "qubit_basis",
    "qutrit_basis",
    "recast",
    "recast_qubit",
    "recast_qutrit",
    "concurrence_pure_2x2",
    "concurrence_vector_norm",
    "concurrence_closed_qubit",
    "concurrence_closed_qutrit",
    "concurrence_wootters",
]

GRAM_DET_MIN = 1e-14
NEAR_DEGENERATE = 1e-3
# eigenvalues of rho at or below this are round-off
EIG_FLOOR = 1e-15


class DegenerateBasisError(ValueError):
    """Coherent states are (numerically) linearly dependent; no orthonormal recast exists."""


class NearDegenerateWarning(UserWarning):
    pass


def coherent_basis(amps):
    """Gram-Schmidt coefficients of coherent states in the orthonormal basis they span.

    Returns a lower-triangular ``L`` with ``|amps[i]> = sum_j L[i, j] |e_j>``.
    The first basis vector is ``|amps[0]>`` itself, matching the usual
    convention ``|0> = |alpha>``.
    """
    amps = [complex(a) for a in amps]
    g = gram_matrix(amps)
    det = float(np.real(np.linalg.det(g)))
    if det <= GRAM_DET_MIN:
        for i, j in itertools.combinations(range(len(amps)), 2):
            if 1.0 - abs(g[i, j]) ** 2 <= GRAM_DET_MIN:
                raise DegenerateBasisError(f"amplitudes {amps[i]} and {amps[j]} are linearly dependent")
        raise DegenerateBasisError(f"amplitudes {amps} are linearly dependent (Gram determinant {det:.3g})")
    if det < NEAR_DEGENERATE:
        warnings.warn(f"coherent states nearly dependent (Gram determinant {det:.3g})", NearDegenerateWarning, stacklevel=3)
    # G[i, j] = <a_i|a_j> = sum_k conj(L[i, k]) L[j, k]
    return np.linalg.cholesky(g).conj()


@dataclass(frozen=True)
class QubitBasisData:
    p1: complex
    N1: float
    coeffs: np.ndarray


@dataclass(frozen=True)
class QutritBasisData:
    p1: complex
    p2: complex
    p3: complex
    x: complex
    N1: float
    N2: float
    coeffs: np.ndarray


def qubit_basis(alpha, beta):
    """``|0> = |alpha>``, ``|beta> = p1 |0> + N1 |1>`` with ``p1 = <alpha|beta>``."""
    coeffs = coherent_basis([alpha, beta])
    return QubitBasisData(p1=complex(coeffs[1, 0]), N1=float(coeffs[1, 1].real), coeffs=coeffs)


def qutrit_basis(alpha, beta, gamma):
    """Orthonormal basis spanned by ``|alpha>, |beta>, |gamma>``.

    ``p1 = <alpha|beta>``, ``p2 = <gamma|beta>``, ``p3 = <gamma|alpha>``;
    ``|gamma> = p3 |0> - x N1 |1> + N2 |2>`` with
    ``x = (p1 p3 - p2) / (1 - p1^2)`` for real amplitudes.
    """
    coeffs = coherent_basis([alpha, beta, gamma])
    n1 = float(coeffs[1, 1].real)
    return QutritBasisData(
        p1=overlap(alpha, beta),
        p2=overlap(gamma, beta),
        p3=overlap(gamma, alpha),
        x=complex(-coeffs[2, 1] / n1),
        N1=n1,
        N2=float(coeffs[2, 2].real),
        coeffs=coeffs,
    )


def _distinct(values):
    out = []
    for v in values:
        if not any(abs(v - u) < MERGE_TOL for u in out):
            out.append(v)
    return out


def recast(state, basis_amps=None, dim=None):
    """Amplitude matrix ``a[i, j]`` of a two-mode coherent state in the Gram-Schmidt basis.

    Both modes are expanded in the basis spanned by ``basis_amps`` (default:
    the distinct amplitudes of the state in order of appearance).  The result
    is zero-padded to ``dim`` if the basis is smaller.
    """
    if basis_amps is None:
        basis_amps = _distinct(list(state.amps1) + list(state.amps2))
    basis_amps = [complex(a) for a in basis_amps]
    dim = dim or len(basis_amps)
    if len(basis_amps) > 1:
        coeffs = coherent_basis(basis_amps)
    else:
        coeffs = np.ones((1, 1), dtype=complex)

    def index(a):
        for k, b in enumerate(basis_amps):
            if abs(a - b) < MERGE_TOL:
                return k
        raise ValueError(f"amplitude {a} is not in the recast basis")

    mat = np.zeros((dim, dim), dtype=complex)
    k = len(basis_amps)
    for c, a, b in state.terms:
        mat[:k, :k] += c * np.outer(coeffs[index(a)], coeffs[index(b)])
    return mat / math.sqrt(normalization(state))


def recast_qubit(state, basis_amps=None):
    """2x2 amplitude matrix of a qubit-like ECS built on ``{alpha, beta}``."""
    if basis_amps is None and len(_distinct(list(state.amps1) + list(state.amps2))) > 2:
        raise ValueError("state involves more than two distinct amplitudes")
    return recast(state, basis_amps, dim=2)


def recast_qutrit(state, basis_amps=None):
    """3x3 amplitude matrix of a qutrit-like ECS built on ``{alpha, beta, gamma}``."""
    if basis_amps is None and len(_distinct(list(state.amps1) + list(state.amps2))) > 3:
        raise ValueError("state involves more than three distinct amplitudes")
    return recast(state, basis_amps, dim=3)


def concurrence_pure_2x2(a):
    a = np.asarray(a)
    return float(2.0 * abs(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]))


def concurrence_vector_norm(a):
    """``2 sqrt(sum_{i<j, k<l} |a_ik a_jl - a_il a_jk|^2)`` over all 2x2 minors."""
    a = np.asarray(a)
    d1, d2 = a.shape
    total = 0.0
    for i, j in itertools.combinations(range(d1), 2):
        for k, l in itertools.combinations(range(d2), 2):
            total += abs(a[i, k] * a[j, l] - a[i, l] * a[j, k]) ** 2
    return float(2.0 * math.sqrt(total))


def _real_nonneg(value, name):
    if isinstance(value, complex) or np.iscomplexobj(value):
        raise TypeError(f"{name} must be real; use the recast pipeline for complex amplitudes")
    value = float(value)
    if value < 0:
        raise ValueError(f"{name} must be >= 0")
    return value


def concurrence_closed_qubit(delta):
    """Concurrence of ``|a>|a> + |b>|b>`` (real amplitudes, mu = 1) versus ``delta = |a - b|``."""
    d2 = _real_nonneg(delta, "delta") ** 2
    # (1 - e^-d2) / (1 + e^-d2), written so small separations keep full precision
    return math.tanh(0.5 * d2)


@dataclass(frozen=True)
class SeparationParams:
    """Pairwise distances ``|alpha-beta|, |alpha-gamma|, |beta-gamma|``."""

    d1: float
    d2: float
    d3: float

    @classmethod
    def from_amplitudes(cls, alpha, beta, gamma):
        for v in (alpha, beta, gamma):
            if isinstance(v, complex) and v.imag != 0:
                raise TypeError("separation parameters are defined for real amplitudes")
        alpha, beta, gamma = float(np.real(alpha)), float(np.real(beta)), float(np.real(gamma))
        return cls(abs(alpha - beta), abs(alpha - gamma), abs(beta - gamma))


def concurrence_closed_qutrit(sep, d2=None, d3=None):
    """Concurrence-vector norm of the balanced three-term ECS (real amplitudes, mu1 = mu2 = 1).

    Accepts a :class:`SeparationParams` or the three separations directly.
    """
    if isinstance(sep, SeparationParams):
        d1, d2, d3 = sep.d1, sep.d2, sep.d3
    else:
        d1 = sep
    s1, s2, s3 = (_real_nonneg(v, name) ** 2 for v, name in ((d1, "d1"), (d2, "d2"), (d3, "d3")))
    e = math.exp
    radicand = (
        3.0
        + e(-2 * s1) + e(-2 * s2) + e(-2 * s3)
        + 2 * e(-s2 - s3)
        - 12 * e(-0.5 * (s1 + s2 + s3))
        + 2 * e(-s1) * (e(-s2) + e(-s3))
    )
    # vanishes at the origin; round-off can leave it a hair below zero
    radicand = max(radicand, 0.0)
    return 2.0 * math.sqrt(radicand) / (3.0 + 2 * e(-s1) + 2 * e(-s2) + 2 * e(-s3))


_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def concurrence_wootters(rho):
    """Two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of ``rho rho~`` with
    ``rho~ = (sy x sy) rho* (sy x sy)``, in decreasing order.  They are
    obtained as singular values of ``A^T (sy x sy) A`` where ``rho = A A^dag``,
    which avoids square roots of eigenvalues that are zero up to round-off.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > 1e-9:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-9:
        raise ValueError("density matrix trace is not 1")
    evals, evecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if evals.min() < -1e-9:
        raise ValueError(f"density matrix has eigenvalue {evals.min():.3g}")
    keep = evals > EIG_FLOOR
    a = evecs[:, keep] * np.sqrt(evals[keep])
    lam = np.zeros(4)
    if a.shape[1]:
        sv = np.linalg.svd(a.T @ _SYSY @ a, compute_uv=False)
        lam[: len(sv)] = sv
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1:].sum()))
