"""Photon loss on the qubit-like ECS ``|a>|a> + mu |b>|b>``.

Each mode passes a channel ``|a>|0>_E -> |sqrt(eta) a>|sqrt(1-eta) a>_E``,
with ``eta`` the fraction of surviving photons.
"""

import math
from dataclasses import dataclass

import numpy as np

from .phasespace import CoherentKernel

__all__ = [
    "NoisyQubitECS",
    "apply_noise",
    "noisy_reduced_kernel",
    "wigner_noisy_closed",
    "noisy_two_mode_density",
    "concurrence_noisy_closed",
]


def _check_eta(eta):
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    return eta


@dataclass(frozen=True)
class NoisyQubitECS:
    alpha: float
    beta: float
    mu: float
    eta: float
    p: float

    @property
    def system_amps(self):
        s = math.sqrt(self.eta)
        return s * self.alpha, s * self.beta

    @property
    def environment_amps(self):
        s = math.sqrt(1.0 - self.eta)
        return s * self.alpha, s * self.beta

    def four_mode_terms(self):
        """``(coeff, (mode1, mode2, env1, env2))`` before normalization."""
        (sa, sb), (ea, eb) = self.system_amps, self.environment_amps
        return [(1.0, (sa, sa, ea, ea)), (self.mu, (sb, sb, eb, eb))]

    @property
    def norm_sq(self):
        return 1.0 + self.mu**2 + 2.0 * self.mu * self.p**2


def apply_noise(alpha, beta, eta, mu=1.0):
    """Send both modes of the qubit-like ECS through the loss channel."""
    eta = _check_eta(eta)
    for v in (alpha, beta, mu):
        if np.iscomplexobj(v) and np.imag(v) != 0:
            raise ValueError("the noisy-channel closed forms assume real alpha, beta, mu")
    alpha, beta, mu = float(np.real(alpha)), float(np.real(beta)), float(np.real(mu))
    return NoisyQubitECS(alpha, beta, mu, eta, math.exp(-0.5 * (alpha - beta) ** 2))


def noisy_reduced_kernel(state):
    """Mode-1 state after tracing out mode 2 and both environment modes.

    Cross dyads carry ``mu p^(2 - eta)``: ``p^eta`` from mode 2 and
    ``p^(1 - eta)`` from each environment mode.
    """
    sa, sb = state.system_amps
    m = state.norm_sq
    cross = state.mu * state.p ** (2.0 - state.eta) / m
    return CoherentKernel(
        (
            (1.0 / m, sa, sa),
            (state.mu**2 / m, sb, sb),
            (cross, sa, sb),
            (cross, sb, sa),
        )
    )


def wigner_noisy_closed(gamma, state):
    """Closed-form Wigner function of :func:`noisy_reduced_kernel`."""
    a, b, mu, eta, p = state.alpha, state.beta, state.mu, state.eta, state.p
    g = np.asarray(gamma, dtype=complex)
    gc = g.conj()
    s = math.sqrt(eta)
    val = (
        np.exp(-2 * np.abs(g - s * a) ** 2)
        + mu**2 * np.exp(-2 * np.abs(g - s * b) ** 2)
        + mu * p ** (2 - eta) * math.exp(-0.5 * eta * (a + b) ** 2) * np.exp(-2 * np.abs(g) ** 2)
        * (np.exp(2 * s * (gc * a + b * g)) + np.exp(2 * s * (gc * b + a * g)))
    )
    return (2.0 / (np.pi * state.norm_sq) * val).real


def noisy_two_mode_density(alpha, beta, eta):
    """Two-qubit density matrix of modes 1 and 2 after loss (mu = 1).

    Basis ``|0> = |sqrt(eta) alpha>`` and its Gram-Schmidt partner, ordered
    ``|00>, |01>, |10>, |11>``.  Entries are built from ``log p`` so that the
    ``p^-eta`` factor never overflows.
    """
    eta = _check_eta(eta)
    alpha, beta = float(alpha), float(beta)
    if alpha == beta:
        raise ValueError("alpha == beta: the two-dimensional basis is undefined")
    lp = -0.5 * (alpha - beta) ** 2  # log p

    def pw(k):
        return math.exp(k * lp)

    one_minus = -math.expm1(2 * eta * lp)  # 1 - p^(2 eta)
    a11 = 1 + 2 * pw(2) + pw(4 * eta)
    a12 = math.sqrt(one_minus) * (pw(2 - eta) + pw(3 * eta))
    a14 = one_minus * (pw(2 * eta) + pw(2 - 2 * eta))
    a22 = pw(2 * eta) * one_minus
    a24 = pw(eta) * one_minus**1.5
    a44 = one_minus**2
    mat = np.array(
        [
            [a11, a12, a12, a14],
            [a12, a22, a22, a24],
            [a12, a22, a22, a24],
            [a14, a24, a24, a44],
        ]
    )
    return mat / (2.0 + 2.0 * pw(2))


def concurrence_noisy_closed(p, eta):
    """``p^2 (p^(-2 eta) - 1) / (1 + p^2)`` for overlap ``0 < p < 1``."""
    eta = _check_eta(eta)
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return p * p * (p ** (-2.0 * eta) - 1.0) / (1.0 + p * p)
