"""One-mode Wigner functions of coherent-state mixtures, grids and peak analysis.

A reduced state is held as a :class:`CoherentKernel`, a sum of weighted
coherent dyads ``w |a><b|``.  Every dyad has a Gaussian Wigner function, so
:func:`wigner_kernel` is the single evaluation engine; the literal closed
forms ``wigner_closed_*`` exist to be checked against it.
"""

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .coherent import overlap
from .fock import coherent_fock

__all__ = [
    "Dyad",
    "CoherentKernel",
    "GridSpec",
    "WignerGrid",
    "Peak",
    "PeakSet",
    "MarginWarning",
    "reduce_to_kernel",
    "kernel_density_matrix",
    "wigner_dyad",
    "wigner_kernel",
    "wigner_kernel_dx",
    "wigner_closed_qubit",
    "wigner_closed_qutrit",
    "wigner_closed_qed",
    "default_grid",
    "wigner_grid",
    "integrate_grid",
    "kernel_profile",
    "find_stationary_points",
    "find_peaks_profile",
    "transcendental_intersections",
    "peak_separation",
    "kernel_peaks",
]

MAX_CELLS = 4_000_000
PEAK_MERGE = 1e-4


class MarginWarning(UserWarning):
    """Grid does not extend far enough past the kernel amplitudes for a faithful integral."""


class Dyad(NamedTuple):
    weight: complex
    ket: complex
    bra: complex


@dataclass(frozen=True)
class CoherentKernel:
    """One-mode operator ``sum_k w_k |ket_k><bra_k|``."""

    dyads: tuple

    def __post_init__(self):
        object.__setattr__(self, "dyads", tuple(Dyad(complex(w), complex(k), complex(b)) for w, k, b in self.dyads))

    @property
    def amplitudes(self):
        return sorted({d.ket for d in self.dyads} | {d.bra for d in self.dyads}, key=lambda z: (z.real, z.imag))

    def trace(self):
        return sum(d.weight * overlap(d.bra, d.ket) for d in self.dyads)

    def is_hermitian(self, tol=1e-12):
        for w, k, b in self.dyads:
            partner = sum(d.weight for d in self.dyads if abs(d.ket - b) < 1e-12 and abs(d.bra - k) < 1e-12)
            mine = sum(d.weight for d in self.dyads if abs(d.ket - k) < 1e-12 and abs(d.bra - b) < 1e-12)
            if abs(partner - mine.conjugate()) > tol:
                return False
        return True


def reduce_to_kernel(state):
    """Trace out mode 2 of ``sum_i c_i |a_i>|b_i>``.

    Each pair ``(i, j)`` contributes ``c_i conj(c_j) <b_j|b_i> |a_i><a_j|``.
    """
    dyads = []
    for ci, ai, bi in state.terms:
        for cj, aj, bj in state.terms:
            dyads.append((ci * cj.conjugate() * overlap(bj, bi), ai, aj))
    return CoherentKernel(tuple(dyads))


def kernel_density_matrix(kernel, n_cut):
    """Fock-space matrix of a kernel (truncated, not renormalized)."""
    vecs = {}
    rho = np.zeros((n_cut, n_cut), dtype=complex)
    for w, k, b in kernel.dyads:
        for z in (k, b):
            if z not in vecs:
                vecs[z] = coherent_fock(z, n_cut)
        rho += w * np.outer(vecs[k], vecs[b].conj())
    return rho


def wigner_dyad(weight, ket, bra, gamma):
    """Wigner function of ``w |ket><bra|`` at ``gamma`` (complex; arrays broadcast).

    ``w (2/pi) <bra|ket> exp(-2 (gamma - ket)(conj(gamma) - conj(bra)))``
    """
    gamma = np.asarray(gamma, dtype=complex)
    ket, bra = complex(ket), complex(bra)
    return weight * (2.0 / np.pi) * overlap(bra, ket) * np.exp(-2.0 * (gamma - ket) * (gamma.conj() - bra.conjugate()))


def wigner_kernel(kernel, gamma):
    """Real Wigner function of a Hermitian kernel at ``gamma``."""
    gamma = np.asarray(gamma, dtype=complex)
    total = np.zeros(gamma.shape, dtype=complex)
    for d in kernel.dyads:
        total = total + wigner_dyad(d.weight, d.ket, d.bra, gamma)
    return total.real


def wigner_kernel_dx(kernel, gamma):
    """Analytic derivative of :func:`wigner_kernel` along Re(gamma)."""
    gamma = np.asarray(gamma, dtype=complex)
    total = np.zeros(gamma.shape, dtype=complex)
    for w, k, b in kernel.dyads:
        total = total + wigner_dyad(w, k, b, gamma) * (-2.0) * ((gamma.conj() - b.conjugate()) + (gamma - k))
    return total.real


def _require_real(**params):
    for name, v in params.items():
        if np.iscomplexobj(v) and np.imag(v) != 0:
            raise ValueError(f"{name} must be real for the closed form")


def wigner_closed_qubit(gamma, alpha, beta, mu=1.0):
    """Closed-form Wigner function of the reduced qubit-like ECS (real alpha, beta, mu)."""
    _require_real(alpha=alpha, beta=beta, mu=mu)
    a, b, mu = float(np.real(alpha)), float(np.real(beta)), float(np.real(mu))
    g = np.asarray(gamma, dtype=complex)
    gc = g.conj()
    p = math.exp(-0.5 * (a - b) ** 2)
    m2 = 1.0 + mu**2 + 2.0 * mu * p**2
    val = (
        np.exp(-2 * np.abs(g - a) ** 2)
        + mu**2 * np.exp(-2 * np.abs(g - b) ** 2)
        + mu * math.exp(-(a**2 + b**2)) * np.exp(-2 * np.abs(g) ** 2)
        * (np.exp(2 * (g * b + gc * a)) + np.exp(2 * (g * a + gc * b)))
    )
    return (2.0 / (np.pi * m2) * val).real


def wigner_closed_qutrit(delta_pt, alpha, beta, gamma, mu1=1.0, mu2=1.0):
    """Closed-form Wigner function of the reduced three-term balanced ECS (real parameters)."""
    _require_real(alpha=alpha, beta=beta, gamma=gamma, mu1=mu1, mu2=mu2)
    a, b, c = (float(np.real(v)) for v in (alpha, beta, gamma))
    mu1, mu2 = float(np.real(mu1)), float(np.real(mu2))
    d = np.asarray(delta_pt, dtype=complex)
    dc = d.conj()
    p1, p2, p3 = math.exp(-0.5 * (a - b) ** 2), math.exp(-0.5 * (c - b) ** 2), math.exp(-0.5 * (c - a) ** 2)
    m3 = 1 + mu1**2 + mu2**2 + 2 * mu1 * p1**2 + 2 * mu1 * mu2 * p2**2 + 2 * mu2 * p3**2
    env = np.exp(-2 * np.abs(d) ** 2)
    val = (
        np.exp(-2 * np.abs(d - a) ** 2)
        + mu1**2 * np.exp(-2 * np.abs(d - b) ** 2)
        + mu2**2 * np.exp(-2 * np.abs(d - c) ** 2)
        + mu1 * p1 * math.exp(-0.5 * (a + b) ** 2) * env * (np.exp(2 * (d * b + dc * a)) + np.exp(2 * (dc * b + d * a)))
        + mu1 * mu2 * p2 * math.exp(-0.5 * (c + b) ** 2) * env * (np.exp(2 * (d * c + dc * b)) + np.exp(2 * (dc * c + d * b)))
        + mu2 * p3 * math.exp(-0.5 * (a + c) ** 2) * env * (np.exp(2 * (d * c + dc * a)) + np.exp(2 * (dc * c + d * a)))
    )
    return (2.0 / (np.pi * m3) * val).real


def wigner_closed_qed(delta_pt, alpha, beta):
    """Closed-form Wigner function of the reduced cavity-QED qutrit state, weights (1, 1.35, 1)."""
    _require_real(alpha=alpha, beta=beta)
    a, b = float(np.real(alpha)), float(np.real(beta))
    d = np.asarray(delta_pt, dtype=complex)
    dc = d.conj()
    s2 = math.sqrt(2.0)
    m3 = 2 * math.exp(-8 * a * a) + 5.4 * math.exp(-2 * a * a) + 3.8225
    env = np.exp(-2 * np.abs(d) ** 2)
    val = (
        np.exp(-2 * np.abs(d - (2 * a + b) / s2) ** 2)
        + 1.8225 * np.exp(-2 * np.abs(d - b / s2) ** 2)
        + np.exp(-2 * np.abs(d - (-2 * a + b) / s2) ** 2)
        + 1.35 * math.exp(-2 * a * a - 2 * a * b - b * b) * env
        * (np.exp(s2 * (d * b + dc * (2 * a + b))) + np.exp(s2 * (dc * b + d * (2 * a + b))))
        + 1.35 * math.exp(-2 * a * a + 2 * a * b - b * b) * env
        * (np.exp(s2 * (d * (-2 * a + b) + dc * b)) + np.exp(s2 * (dc * (-2 * a + b) + d * b)))
        + math.exp(-4 * a * a - b * b) * env
        * (np.exp(s2 * (d * (-2 * a + b) + dc * (2 * a + b))) + np.exp(s2 * (dc * (-2 * a + b) + d * (2 * a + b))))
    )
    return (2.0 / (np.pi * m3) * val).real


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    step: float = 0.05

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        for v in (self.x_min, self.x_max, self.y_min, self.y_max, self.step):
            if not math.isfinite(v):
                raise ValueError("grid ranges must be finite")
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValueError("grid ranges are reversed")

    def axes(self):
        """Sample points from the lower bounds in ``step`` increments, reaching at least the upper bounds."""
        nx = int(math.ceil((self.x_max - self.x_min) / self.step - 1e-9)) + 1
        ny = int(math.ceil((self.y_max - self.y_min) / self.step - 1e-9)) + 1
        return self.x_min + self.step * np.arange(nx), self.y_min + self.step * np.arange(ny)


def default_grid(amplitudes, step=0.05, margin=4.0):
    """Covers every amplitude by ``margin`` units in both quadratures."""
    amps = np.asarray(list(amplitudes), dtype=complex)
    return GridSpec(
        float(amps.real.min() - margin),
        float(amps.real.max() + margin),
        float(min(amps.imag.min(), 0.0) - margin),
        float(max(amps.imag.max(), 0.0) + margin),
        step,
    )


@dataclass(frozen=True)
class WignerGrid:
    """Wigner values sampled on ``x + iy``; ``values[i, j]`` sits at ``(xs[j], ys[i])``."""

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    step: float
    amplitudes: tuple = field(default=())

    @property
    def x_min(self):
        return float(self.xs[0])

    @property
    def x_max(self):
        return float(self.xs[-1])

    @property
    def y_min(self):
        return float(self.ys[0])

    @property
    def y_max(self):
        return float(self.ys[-1])

    def min_value(self):
        return float(self.values.min())


def wigner_grid(kernel, spec, max_cells=MAX_CELLS, workers=1):
    """Evaluate a kernel's Wigner function row by row on ``spec``.

    Cells never share accumulators, so the result does not depend on
    ``workers``.
    """
    xs, ys = spec.axes()
    if len(xs) * len(ys) > max_cells:
        raise ValueError(f"grid has {len(xs) * len(ys)} cells, more than the cap of {max_cells}")

    def row(y):
        return wigner_kernel(kernel, xs + 1j * y)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, ys))
    else:
        rows = [row(y) for y in ys]
    return WignerGrid(xs, ys, np.array(rows), spec.step, tuple(kernel.amplitudes))


def integrate_grid(grid, margin=4.0):
    """Riemann-sum integral of the sampled Wigner function."""
    amps = np.asarray(grid.amplitudes, dtype=complex)
    if amps.size:
        short = (
            amps.real.min() - grid.x_min < margin - 1e-9
            or grid.x_max - amps.real.max() < margin - 1e-9
            or amps.imag.min() - grid.y_min < margin - 1e-9
            or grid.y_max - amps.imag.max() < margin - 1e-9
        )
        if short:
            warnings.warn(f"grid margin below {margin} around the kernel amplitudes", MarginWarning, stacklevel=2)
    return float(grid.values.sum() * grid.step**2)


@dataclass(frozen=True)
class Peak:
    x: float
    y: float
    height: float


@dataclass(frozen=True)
class PeakSet:
    peaks: tuple

    def __len__(self):
        return len(self.peaks)

    @property
    def xs(self):
        return [p.x for p in self.peaks]


def kernel_profile(kernel, y=0.0):
    """``(W(x), dW/dx)`` along the horizontal line ``Im(gamma) = y``."""

    def f(x):
        return wigner_kernel(kernel, np.asarray(x) + 1j * y)

    def df(x):
        return wigner_kernel_dx(kernel, np.asarray(x) + 1j * y)

    return f, df


def _bisect(df, lo, hi, tol=1e-10):
    flo = df(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = df(mid)
        if abs(fm) < tol or hi - lo < 1e-15 * max(1.0, abs(mid)):
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_stationary_points(profile, x_range, samples=2000, derivative=None):
    """Zeros of ``dW/dx`` on ``x_range`` as ``(x, kind)`` with kind ``'max'`` or ``'min'``.

    Uses the analytic ``derivative`` when given, otherwise centred differences.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    lo, hi = x_range
    h = 1e-5 * max(1.0, hi - lo)
    if derivative is None:
        def derivative(x):
            return (profile(np.asarray(x) + h) - profile(np.asarray(x) - h)) / (2 * h)

    def df(x):
        return float(derivative(np.asarray(float(x))))

    xs = np.linspace(lo, hi, samples)
    d = np.asarray(derivative(xs), dtype=float)
    found = []
    for i in range(samples - 1):
        if d[i] == 0.0:
            root = xs[i]
        elif d[i] * d[i + 1] < 0:
            root = _bisect(df, xs[i], xs[i + 1])
        else:
            continue
        # second difference decides the kind
        step = max(1e-4, (hi - lo) / samples)
        curv = float(profile(np.asarray(root + step)) - 2 * profile(np.asarray(root)) + profile(np.asarray(root - step)))
        found.append((float(root), "max" if curv < 0 else "min"))
    if d[-1] == 0.0:
        found.append((float(xs[-1]), "max"))
    out = []
    for x, kind in found:
        if out and abs(x - out[-1][0]) < PEAK_MERGE and kind == out[-1][1]:
            continue
        out.append((x, kind))
    return out


def find_peaks_profile(profile, x_range, samples=2000, derivative=None, y=0.0):
    """Local maxima of a 1-D Wigner profile, sorted by x.

    Maxima closer than 1e-4 are merged, keeping the higher one.
    """
    maxima = [x for x, kind in find_stationary_points(profile, x_range, samples, derivative) if kind == "max"]
    if not maxima:
        raise ValueError(f"no maxima found in {x_range}; widen the range")
    peaks = []
    for x in sorted(maxima):
        h = float(profile(np.asarray(x)))
        if peaks and x - peaks[-1].x < PEAK_MERGE:
            if h > peaks[-1].height:
                peaks[-1] = Peak(x, y, h)
            continue
        peaks.append(Peak(x, y, h))
    return PeakSet(tuple(peaks))


def transcendental_intersections(alpha, beta, samples=4000):
    """Solutions of ``exp(-(x-alpha)^2 + (x-beta)^2) = (x - beta)/(alpha - x)``.

    The right side is positive only between alpha and beta, so the search is
    confined to that open interval.  The equation is cleared of its pole,
    ``(alpha - x) exp(...) - (x - beta) = 0``, before bracketing.
    """
    a, b = float(alpha), float(beta)
    if a == b:
        raise ValueError("alpha and beta must differ")
    lo, hi = min(a, b), max(a, b)

    def g(x):
        return (a - x) * np.exp((a - b) * (2 * x - a - b)) - (x - b)

    pad = 1e-9 * (hi - lo)
    xs = np.linspace(lo + pad, hi - pad, samples)
    vals = g(xs)
    roots = []
    for i in range(samples - 1):
        if vals[i] == 0.0:
            roots.append(float(xs[i]))
        elif vals[i] * vals[i + 1] < 0:
            x0, x1, f0 = xs[i], xs[i + 1], vals[i]
            for _ in range(200):
                mid = 0.5 * (x0 + x1)
                fm = g(mid)
                if fm == 0.0 or x1 - x0 < 1e-15 * max(1.0, abs(mid)):
                    break
                if (fm > 0) == (f0 > 0):
                    x0, f0 = mid, fm
                else:
                    x1 = mid
            roots.append(float(0.5 * (x0 + x1)))
    return roots


def peak_separation(peaks):
    """Largest pairwise x-distance between peaks (0 for a single peak)."""
    xs = peaks.xs if isinstance(peaks, PeakSet) else [p.x for p in peaks]
    if not xs:
        raise ValueError("empty peak set")
    return float(max(xs) - min(xs))


def kernel_peaks(kernel, y=0.0, margin=3.0, samples=2000):
    """Peaks of a kernel's Wigner function along ``Im(gamma) = y``.

    The scan covers the real parts of the kernel amplitudes widened by
    ``margin`` and uses the analytic derivative.
    """
    re = [z.real for z in kernel.amplitudes]
    f, df = kernel_profile(kernel, y)
    return find_peaks_profile(f, (min(re) - margin, max(re) + margin), samples, derivative=df, y=y)
