"""Coherent-state algebra and the state-generation procedures.

States are kept as short lists of ``(coefficient, amplitude)`` terms, so
every operation here is exact up to floating point: displacements shift
amplitudes (with the exact phase), beam splitters rotate amplitude pairs and
the cavity protocol is a sum over atomic paths.
"""

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "CoherentTerm",
    "ECSTerm",
    "ModeSuperposition",
    "TwoModeECS",
    "AtomFieldState",
    "ProtocolConfig",
    "ProtocolResult",
    "DegenerateAmplitudeWarning",
    "OPTIMAL_EPSILONS",
    "QED_WEIGHTS",
    "overlap",
    "gram_matrix",
    "generate_superposition",
    "apply_displacement",
    "apply_phase_shifter",
    "with_vacuum",
    "apply_beamsplitter",
    "build_qubit_ecs",
    "build_qutrit_ecs",
    "run_cavity_protocol",
    "build_qutrit_qed",
    "normalization",
]

MERGE_TOL = 1e-12

# classical-field amplitudes that give weights ~ (1, 1.35, 1) after two cycles
OPTIMAL_EPSILONS = (-0.8200, 2.1184, -0.4720)
QED_WEIGHTS = (1.0, 1.35, 1.0)


class DegenerateAmplitudeWarning(UserWarning):
    """Coincident coherent amplitudes were merged; the state is less entangled than its form suggests."""


class CoherentTerm(NamedTuple):
    coeff: complex
    amp: complex


class ECSTerm(NamedTuple):
    coeff: complex
    amp1: complex
    amp2: complex


def overlap(alpha, beta):
    """``<alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta)``."""
    alpha, beta = complex(alpha), complex(beta)
    return cmath.exp(-0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + alpha.conjugate() * beta)


def gram_matrix(amps):
    """Matrix of pairwise overlaps ``G[i, j] = <amps[i]|amps[j]>``."""
    a = np.asarray(amps, dtype=complex)
    return np.exp(-0.5 * np.abs(a[:, None]) ** 2 - 0.5 * np.abs(a[None, :]) ** 2 + a.conj()[:, None] * a[None, :])


def _check_finite(*values):
    for v in values:
        if not np.isfinite(complex(v)):
            raise ValueError(f"non-finite parameter {v!r}")


def _unit_phase(phi):
    """``exp(-i phi)``, exact for multiples of pi/2."""
    k = phi / (math.pi / 2)
    if abs(k - round(k)) < 1e-15 * max(1.0, abs(k)):
        return (1, -1j, -1, 1j)[int(round(k)) % 4]
    return cmath.exp(-1j * phi)


def _merge(terms, key):
    """Sum coefficients of terms whose amplitudes coincide within MERGE_TOL."""
    merged = []
    for t in terms:
        for i, m in enumerate(merged):
            if all(abs(complex(x) - complex(y)) < MERGE_TOL for x, y in zip(key(t), key(m))):
                merged[i] = m._replace(coeff=m.coeff + t.coeff)
                break
        else:
            merged.append(t)
    cmax = max(abs(t.coeff) for t in merged)
    kept = [t for t in merged if abs(t.coeff) > 1e-15 * cmax]
    return tuple(kept), len(merged) < len(terms)


@dataclass(frozen=True)
class ModeSuperposition:
    """``sum_i c_i |a_i>`` in one mode."""

    terms: tuple
    normalized: bool = False

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a superposition needs at least one term")
        terms = tuple(CoherentTerm(complex(c), complex(a)) for c, a in self.terms)
        _check_finite(*(x for t in terms for x in t))
        terms, _ = _merge(terms, key=lambda t: (t.amp,))
        object.__setattr__(self, "terms", terms)

    @property
    def coeffs(self):
        return np.array([t.coeff for t in self.terms])

    @property
    def amps(self):
        return np.array([t.amp for t in self.terms])

    def norm_sq(self):
        c = self.coeffs
        return float(np.real(c.conj() @ gram_matrix(self.amps) @ c))

    def normalize(self):
        nrm = math.sqrt(self.norm_sq())
        if nrm <= 0.0:
            raise ValueError("cannot normalize a zero state")
        return ModeSuperposition(tuple((c / nrm, a) for c, a in self.terms), normalized=True)


@dataclass(frozen=True)
class TwoModeECS:
    """``sum_i c_i |a_i>|b_i>`` over two modes."""

    terms: tuple
    normalized: bool = False
    merged: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a two-mode state needs at least one term")
        terms = tuple(ECSTerm(complex(c), complex(a), complex(b)) for c, a, b in self.terms)
        _check_finite(*(x for t in terms for x in t))
        terms, merged = _merge(terms, key=lambda t: (t.amp1, t.amp2))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "merged", self.merged or merged)

    @property
    def coeffs(self):
        return np.array([t.coeff for t in self.terms])

    @property
    def amps1(self):
        return np.array([t.amp1 for t in self.terms])

    @property
    def amps2(self):
        return np.array([t.amp2 for t in self.terms])

    @property
    def is_balanced(self):
        return all(abs(t.amp1 - t.amp2) < MERGE_TOL for t in self.terms)

    @property
    def is_separable(self):
        """True when only one product term survives merging."""
        return len(self.terms) == 1

    def normalize(self):
        nrm = math.sqrt(normalization(self))
        return TwoModeECS(tuple((c / nrm, a, b) for c, a, b in self.terms), normalized=True, merged=self.merged)


def normalization(state):
    """Squared norm ``sum_ij conj(c_i) c_j <a_i|a_j><b_i|b_j>`` of a two-mode state."""
    c = state.coeffs
    g = gram_matrix(state.amps1) * gram_matrix(state.amps2)
    val = c.conj() @ g @ c
    if abs(val.imag) > 1e-12 * max(1.0, abs(val)):
        raise ArithmeticError(f"norm has imaginary part {val.imag:.3g}")
    if val.real <= 0.0:
        raise ValueError("state norm is not positive (numerically degenerate input)")
    return float(val.real)


def generate_superposition(lam, alpha, beta):
    """Displaced-parity superposition ``cos(lam)|alpha> + i sin(lam) e^{i Im(alpha beta*)}|beta>``, normalized."""
    _check_finite(lam, alpha, beta)
    alpha, beta = complex(alpha), complex(beta)
    phase = cmath.exp(1j * (alpha * beta.conjugate()).imag)
    terms = [(math.cos(lam), alpha), (1j * math.sin(lam) * phase, beta)]
    terms = [(c, a) for c, a in terms if abs(c) > 1e-15]
    return ModeSuperposition(tuple(terms)).normalize()


def apply_displacement(state, beta):
    """``D(beta)`` on each term, keeping the phase ``e^{i Im(beta conj(a))}``."""
    _check_finite(beta)
    beta = complex(beta)
    terms = tuple((c * cmath.exp(1j * (beta * a.conjugate()).imag), a + beta) for c, a in state.terms)
    return ModeSuperposition(terms, normalized=state.normalized)


def apply_phase_shifter(state, phi):
    """``exp(-i phi a^dag a)``: rotates every amplitude by ``e^{-i phi}``."""
    _check_finite(phi)
    rot = _unit_phase(phi)
    return ModeSuperposition(tuple((c, a * rot) for c, a in state.terms), normalized=state.normalized)


def with_vacuum(state):
    """Tensor a one-mode superposition with vacuum in mode 2."""
    return TwoModeECS(tuple((c, a, 0.0) for c, a in state.terms), normalized=state.normalized)


def apply_beamsplitter(state, theta):
    """Rotate each amplitude pair: ``(a, b) -> (a cos - b sin, a sin + b cos)``.

    With ``theta = pi/4`` this sends ``|a>|0>`` to ``|a/sqrt2>|a/sqrt2>``.
    """
    _check_finite(theta)
    if abs(theta - math.pi / 4) < 1e-15:
        cs = sn = math.sqrt(0.5)
    else:
        cs, sn = math.cos(theta), math.sin(theta)
    terms = tuple((c, a * cs - b * sn, a * sn + b * cs) for c, a, b in state.terms)
    return TwoModeECS(terms, normalized=state.normalized, merged=state.merged)


def _balanced(amps, weights, kind):
    state = TwoModeECS(tuple((w, a, a) for w, a in zip(weights, amps)))
    if state.merged:
        warnings.warn(f"{kind}: coincident amplitudes merged", DegenerateAmplitudeWarning, stacklevel=3)
    return state.normalize()


def build_qubit_ecs(alpha, beta, mu=1.0):
    """Normalized ``|alpha>|alpha> + mu |beta>|beta>``.

    Coincident amplitudes are merged and reported with a
    :class:`DegenerateAmplitudeWarning`; the result is then a product state.
    """
    _check_finite(alpha, beta, mu)
    return _balanced((alpha, beta), (1.0, mu), "qubit ECS")


def build_qutrit_ecs(alpha, beta, gamma, mu1=1.0, mu2=1.0):
    _check_finite(alpha, beta, gamma, mu1, mu2)
    return _balanced((alpha, beta, gamma), (1.0, mu1, mu2), "qutrit ECS")


@dataclass(frozen=True)
class AtomFieldState:
    """Cavity field attached to the atomic ground (g) and excited (e) levels."""

    g_branch: tuple = ()
    e_branch: tuple = ()

    def branch_norm_sq(self, branch):
        terms = getattr(self, branch)
        if not terms:
            return 0.0
        return ModeSuperposition(terms).norm_sq()

    def norm_sq(self):
        return self.branch_norm_sq("g_branch") + self.branch_norm_sq("e_branch")


@dataclass(frozen=True)
class ProtocolConfig:
    """Classical-field amplitudes ``eps_0 .. eps_N`` and initial cavity amplitude.

    ``recentre`` holds the field displacement applied after each dispersive
    interaction but the last (``N - 1`` values).  The default ``i * alpha``
    returns the excited-branch field of the first cycle to vacuum, which is
    what makes the N = 2 output land on amplitudes ``-2 alpha, 0, 2 alpha``.
    """

    epsilons: tuple
    alpha: complex
    recentre: tuple = None

    def __post_init__(self):
        eps = tuple(complex(e) for e in self.epsilons)
        if len(eps) < 2:
            raise ValueError("need at least two classical-field amplitudes (steps >= 1)")
        _check_finite(*eps, self.alpha)
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.recentre is None:
            object.__setattr__(self, "recentre", (1j * self.alpha,) * (len(eps) - 2))
        elif len(self.recentre) != len(eps) - 2:
            raise ValueError(f"recentre needs {len(eps) - 2} entries, got {len(self.recentre)}")

    @property
    def steps(self):
        return len(self.epsilons) - 1


@dataclass(frozen=True)
class ProtocolResult:
    state: ModeSuperposition
    raw: ModeSuperposition
    probability: float
    history: tuple


def _scale(terms, k):
    return [(c * k, a) for c, a in terms]


def _rotate(st, eps):
    s = 1.0 / math.hypot(1.0, abs(eps))
    # |g> -> (|g> + eps|e>) s,  |e> -> (-eps*|g> + |e>) s
    g = _scale(st.g_branch, s) + _scale(st.e_branch, -eps.conjugate() * s)
    e = _scale(st.g_branch, eps * s) + _scale(st.e_branch, s)
    return AtomFieldState(_tidy(g), _tidy(e))


def _tidy(terms):
    terms = [(c, a) for c, a in terms if c != 0]
    return ModeSuperposition(tuple(terms)).terms if terms else ()


def _disperse(st):
    # interaction time pi*Delta/(2 g^2): ground-state field rotates by +i, excited by -i
    g = [(c, 1j * a) for c, a in st.g_branch]
    e = [(c, -1j * a) for c, a in st.e_branch]
    return AtomFieldState(tuple(g), tuple(e))


def _displace(st, beta):
    def shift(terms):
        return apply_displacement(ModeSuperposition(terms), beta).terms if terms else ()

    return AtomFieldState(shift(st.g_branch), shift(st.e_branch))


def run_cavity_protocol(config):
    """Alternate classical-field rotations with dispersive cavity steps, then detect ``|g>``.

    The atom starts in ``|g>`` with the cavity in ``|alpha>``.  The sequence
    is ``R(eps_0), [disperse, recentre, R(eps_k)] ..., disperse, R(eps_N)``
    followed by projection onto ``|g>``.  For ``N = 1`` the output is
    ``|i alpha> - eps_0 eps_1* |-i alpha>`` up to normalization.

    Returns
    -------
    ProtocolResult
        normalized field state, the unnormalized ground-branch field, the
        detection probability and the atom-field state after every stage.
    """
    st = AtomFieldState(((1.0 + 0j, config.alpha),), ())
    history = [("initial", st)]
    st = _rotate(st, config.epsilons[0])
    history.append(("rotate 0", st))
    for k in range(1, config.steps + 1):
        st = _disperse(st)
        history.append((f"disperse {k}", st))
        if k < config.steps:
            st = _displace(st, config.recentre[k - 1])
            history.append((f"recentre {k}", st))
        st = _rotate(st, config.epsilons[k])
        history.append((f"rotate {k}", st))
    if not st.g_branch:
        raise ValueError("ground-state detection has zero probability")
    raw = ModeSuperposition(st.g_branch)
    prob = raw.norm_sq()
    if prob <= 1e-300:
        raise ValueError("ground-state detection has zero probability")
    return ProtocolResult(raw.normalize(), raw, prob, tuple(history))


def build_qutrit_qed(alpha, beta, weights=QED_WEIGHTS):
    """Qutrit-like ECS from the cavity protocol, a displacement and a 50-50 splitter.

    With the default ``weights`` the field superposition is taken with the
    rounded weights ``(1, 1.35, 1)`` on ``|2 alpha>, |0>, |-2 alpha>``.  With
    ``weights=None`` the exact output of :func:`run_cavity_protocol` for
    :data:`OPTIMAL_EPSILONS` is used instead.
    """
    _check_finite(alpha, beta)
    alpha = complex(alpha)
    if weights is None:
        field_state = run_cavity_protocol(ProtocolConfig(OPTIMAL_EPSILONS, alpha)).state
        field_state = apply_phase_shifter(field_state, math.pi)
    else:
        field_state = ModeSuperposition(tuple(zip(weights, (2 * alpha, 0.0, -2 * alpha))))
    shifted = apply_displacement(field_state, beta)
    out = apply_beamsplitter(with_vacuum(shifted), math.pi / 4)
    return out.normalize()
