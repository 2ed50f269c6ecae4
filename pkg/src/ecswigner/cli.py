"""Command-line access to Wigner grids, peaks, concurrence, noise sweeps and the cavity protocol.

Outputs are data only (CSV and JSON).  Floats are written with ``repr``,
the shortest string that round-trips, so identical invocations give
byte-identical files.  Exit codes: 0 success, 1 verification failure,
2 invalid arguments.
"""

import argparse
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import fock, verify
from .coherent import (
    DegenerateAmplitudeWarning,
    OPTIMAL_EPSILONS,
    ProtocolConfig,
    apply_beamsplitter,
    apply_displacement,
    apply_phase_shifter,
    build_qubit_ecs,
    build_qutrit_ecs,
    build_qutrit_qed,
    run_cavity_protocol,
    with_vacuum,
)
from .entanglement import (
    DegenerateBasisError,
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
from .noise import apply_noise, concurrence_noisy_closed, noisy_reduced_kernel, noisy_two_mode_density, wigner_noisy_closed
from .phasespace import (
    GridSpec,
    MarginWarning,
    default_grid,
    integrate_grid,
    kernel_peaks,
    peak_separation,
    reduce_to_kernel,
    transcendental_intersections,
    wigner_closed_qed,
    wigner_closed_qubit,
    wigner_closed_qutrit,
    wigner_grid,
)

SCHEMA = "1"
KINDS = ("qubit", "qutrit", "qutrit-qed")


class UsageError(ValueError):
    """Invalid combination of arguments (exit code 2)."""


@dataclass
class RunConfig:
    command: str
    kind: str = "qubit"
    alpha: complex = None
    beta: complex = None
    gamma: complex = None
    mu: float = 1.0
    mu1: float = 1.0
    mu2: float = 1.0
    eta: float = None
    grid: dict = field(default_factory=dict)
    step: float = 0.05
    oracle: bool = False
    n_cut: int = None
    out: str = None
    json_path: str = None
    closed_form: bool = False
    workers: int = 1
    eta_step: float = 0.05
    epsilons: tuple = OPTIMAL_EPSILONS

    def validate(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown kind {self.kind!r}")
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if v is not None and not np.isfinite(v):
                raise UsageError(f"--{name} must be finite")
        for name in ("mu", "mu1", "mu2", "step"):
            if not math.isfinite(getattr(self, name)):
                raise UsageError(f"--{name} must be finite")
        if not self.step > 0:
            raise UsageError("--step must be positive")
        if self.eta is not None and not 0.0 <= self.eta <= 1.0:
            raise UsageError("--eta must lie in [0, 1]")
        if not 0.0 < self.eta_step <= 1.0:
            raise UsageError("--eta-step must lie in (0, 1]")
        if self.n_cut is not None and self.n_cut < 1:
            raise UsageError("--ncut must be positive")
        if self.workers < 1:
            raise UsageError("--workers must be positive")
        for k, v in self.grid.items():
            if not math.isfinite(v):
                raise UsageError(f"--{k.replace('_', '')} must be finite")
        return self


def parse_complex(text):
    """Read ``"2"``, ``"1.5-0.5i"`` or ``"3j"`` as a complex number."""
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        z = complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"non-finite value: {text!r}")
    return z


def _finite_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"non-finite value: {text!r}")
    return v


def _eps_list(text):
    try:
        vals = tuple(parse_complex(t) for t in text.split(","))
    except argparse.ArgumentTypeError:
        raise argparse.ArgumentTypeError(f"expected comma-separated amplitudes, got {text!r}") from None
    if len(vals) < 2:
        raise argparse.ArgumentTypeError("need at least two amplitudes")
    return vals


def _num(v):
    """JSON-ready number: floats as is, complex as ``[re, im]`` unless real."""
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        if v.imag == 0.0:
            return float(v.real)
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    return v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _num(obj)


def dump_json(payload):
    body = {"schema": SCHEMA}
    body.update(payload)
    return json.dumps(_jsonable(body), indent=2, allow_nan=False) + "\n"


def grid_csv(grid):
    """Header ``x,y,w``; rows run over y (outer) then x (inner)."""
    buf = io.StringIO()
    buf.write("x,y,w\n")
    for i, y in enumerate(grid.ys):
        ry = repr(float(y))
        for j, x in enumerate(grid.xs):
            buf.write(f"{float(x)!r},{ry},{float(grid.values[i, j])!r}\n")
    return buf.getvalue()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _emit(cfg, primary, summary):
    """Primary data to ``--out`` (or stdout); summary JSON to ``--json`` or stdout when ``--out`` is a file."""
    _write(cfg.out, primary)
    if cfg.json_path:
        _write(cfg.json_path, summary)
    elif cfg.out not in (None, "-"):
        sys.stdout.write(summary)


def _need(cfg, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"--kind {cfg.kind} needs " + ", ".join(f"--{n}" for n in missing))


def _real(cfg, *names):
    for n in names:
        v = getattr(cfg, n)
        if v is not None and complex(v).imag != 0.0:
            raise UsageError(f"--{n} must be real for this computation")


@dataclass
class StateSpec:
    """Everything a command needs about the selected state."""

    state: object
    kernel: object
    closed: object
    params: dict
    amplitudes: list
    noisy: object = None


def build_state(cfg):
    params = {"kind": cfg.kind}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateAmplitudeWarning)
        if cfg.kind == "qubit":
            _need(cfg, "alpha", "beta")
            params.update(alpha=cfg.alpha, beta=cfg.beta, mu=cfg.mu)
            state = build_qubit_ecs(cfg.alpha, cfg.beta, cfg.mu)
            real = complex(cfg.alpha).imag == 0 and complex(cfg.beta).imag == 0

            def closed(g):
                return wigner_closed_qubit(g, cfg.alpha.real, cfg.beta.real, cfg.mu)

        elif cfg.kind == "qutrit":
            _need(cfg, "alpha", "beta", "gamma")
            params.update(alpha=cfg.alpha, beta=cfg.beta, gamma=cfg.gamma, mu1=cfg.mu1, mu2=cfg.mu2)
            state = build_qutrit_ecs(cfg.alpha, cfg.beta, cfg.gamma, cfg.mu1, cfg.mu2)
            real = all(complex(v).imag == 0 for v in (cfg.alpha, cfg.beta, cfg.gamma))

            def closed(g):
                return wigner_closed_qutrit(g, cfg.alpha.real, cfg.beta.real, cfg.gamma.real, cfg.mu1, cfg.mu2)

        else:
            _need(cfg, "alpha", "beta")
            params.update(alpha=cfg.alpha, beta=cfg.beta, weights=[1.0, 1.35, 1.0])
            state = build_qutrit_qed(cfg.alpha, cfg.beta)
            real = complex(cfg.alpha).imag == 0 and complex(cfg.beta).imag == 0

            def closed(g):
                return wigner_closed_qed(g, cfg.alpha.real, cfg.beta.real)

    notes = [str(w.message) for w in caught if issubclass(w.category, DegenerateAmplitudeWarning)]
    if notes:
        params["note"] = notes[0]
    amps = list(state.amps1)
    spec = StateSpec(state, reduce_to_kernel(state), closed if real else None, params, amps)
    if cfg.eta is not None:
        if cfg.kind != "qubit":
            raise UsageError("--eta applies to --kind qubit only")
        _real(cfg, "alpha", "beta")
        if complex(cfg.mu).imag != 0:
            raise UsageError("--mu must be real with --eta")
        noisy = apply_noise(cfg.alpha.real, cfg.beta.real, cfg.eta, cfg.mu)
        spec.noisy = noisy
        spec.kernel = noisy_reduced_kernel(noisy)
        spec.closed = lambda g: wigner_noisy_closed(g, noisy)
        params["eta"] = cfg.eta
    return spec


def _grid_spec(cfg, kernel):
    base = default_grid(kernel.amplitudes, cfg.step)
    vals = {
        "x_min": base.x_min,
        "x_max": base.x_max,
        "y_min": base.y_min,
        "y_max": base.y_max,
    }
    vals.update({k: v for k, v in cfg.grid.items() if v is not None})
    try:
        return GridSpec(step=cfg.step, **vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _peak_report(kernel):
    try:
        peaks = kernel_peaks(kernel)
    except ValueError:
        return [], None
    return [{"x": p.x, "y": p.y, "height": p.height} for p in peaks.peaks], peak_separation(peaks)


def _oracle_density(cfg, spec):
    n = cfg.n_cut or fock.oracle_ncut(max(abs(a) for a in list(spec.state.amps1) + list(spec.state.amps2)))
    rho = verify.oracle_mode1_density(spec.state, n)
    if spec.noisy is not None:
        rho = fock.loss_channel(rho, spec.noisy.eta)
    return rho, n


def cmd_wigner(cfg):
    spec = build_state(cfg)
    gspec = _grid_spec(cfg, spec.kernel)
    if cfg.closed_form:
        if spec.closed is None:
            raise UsageError("--closed-form needs real amplitudes")
        xs, ys = gspec.axes()
        if len(xs) * len(ys) > 4_000_000:
            raise UsageError(f"grid has {len(xs) * len(ys)} cells, more than the cap of 4000000")
        from .phasespace import WignerGrid

        values = np.array([spec.closed(xs + 1j * y) for y in ys])
        grid = WignerGrid(xs, ys, values, gspec.step, tuple(spec.kernel.amplitudes))
    else:
        try:
            grid = wigner_grid(spec.kernel, gspec, workers=cfg.workers)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", MarginWarning)
        integral = integrate_grid(grid)
    peaks, sep = _peak_report(spec.kernel)
    summary = {
        "command": "wigner",
        "params": spec.params,
        "grid": {"x_min": grid.x_min, "x_max": grid.x_max, "y_min": grid.y_min, "y_max": grid.y_max,
                 "step": grid.step, "nx": len(grid.xs), "ny": len(grid.ys)},
        "evaluation": "closed-form" if cfg.closed_form else "kernel",
        "peaks": peaks,
        "peak_count": len(peaks),
        "separation": sep,
        "integral": integral,
        "min_value": grid.min_value(),
    }
    if caught:
        summary["warnings"] = [str(w.message) for w in caught]
    if cfg.oracle:
        rho, n = _oracle_density(cfg, spec)
        orc = fock.wigner_oracle_grid(rho, grid.xs, grid.ys, spec.amplitudes)
        summary["oracle"] = {"n_cut": n, "max_deviation": float(np.abs(orc - grid.values).max())}
    _emit(cfg, grid_csv(grid), dump_json(summary))
    return 0


def cmd_peaks(cfg):
    spec = build_state(cfg)
    peaks, sep = _peak_report(spec.kernel)
    report = {"command": "peaks", "params": spec.params, "profile_y": 0.0, "peaks": peaks,
              "peak_count": len(peaks), "separation": sep}
    if cfg.kind == "qubit" and cfg.eta is None and spec.closed is not None and cfg.alpha != cfg.beta and cfg.mu == 1.0:
        roots = transcendental_intersections(cfg.alpha.real, cfg.beta.real)
        report["transcendental_roots"] = roots
    _write(cfg.json_path or cfg.out, dump_json(report))
    return 0


def _purity_concurrence(rho):
    purity = float(np.trace(rho @ rho).real)
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def cmd_concurrence(cfg):
    spec = None
    report = {"command": "concurrence"}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearDegenerateWarning)
            spec = build_state(cfg)
            report["params"] = spec.params
            values = _concurrence_values(cfg, spec)
    except DegenerateBasisError as exc:
        values = {"closed_form": 0.0, "recast_pipeline": 0.0}
        report["note"] = f"separable: {exc}"
    if spec is not None and spec.state.is_separable and "note" not in report:
        report["note"] = "separable: amplitudes coincide"
    report.update(values)
    keys = [k for k in ("closed_form", "recast_pipeline", "wootters", "oracle") if values.get(k) is not None]
    report["deviations"] = {f"{a}-{b}": abs(values[a] - values[b]) for i, a in enumerate(keys) for b in keys[i + 1:]}
    _write(cfg.json_path or cfg.out, dump_json(report))
    return 0


def _concurrence_values(cfg, spec):
    out = {"closed_form": None, "recast_pipeline": None}
    if spec.noisy is not None:
        nz = spec.noisy
        if nz.alpha == nz.beta:
            return {"closed_form": 0.0, "wootters": 0.0}
        out.pop("recast_pipeline")
        out["closed_form"] = concurrence_noisy_closed(nz.p, nz.eta) if nz.eta > 0 else 0.0
        out["wootters"] = concurrence_wootters(noisy_two_mode_density(nz.alpha, nz.beta, nz.eta))
        return out
    st = spec.state
    if st.is_separable:
        return {"closed_form": 0.0, "recast_pipeline": 0.0}
    if cfg.kind == "qubit":
        out["recast_pipeline"] = concurrence_pure_2x2(recast_qubit(st))
        if spec.closed is not None and cfg.mu == 1.0:
            out["closed_form"] = concurrence_closed_qubit(abs(cfg.alpha.real - cfg.beta.real))
    else:
        out["recast_pipeline"] = concurrence_vector_norm(recast_qutrit(st))
        if cfg.kind == "qutrit" and spec.closed is not None and cfg.mu1 == 1.0 and cfg.mu2 == 1.0:
            sep = SeparationParams.from_amplitudes(cfg.alpha.real, cfg.beta.real, cfg.gamma.real)
            out["closed_form"] = concurrence_closed_qutrit(sep)
    if cfg.oracle:
        rho, n = _oracle_density(cfg, spec)
        out["oracle"] = _purity_concurrence(rho)
        out["oracle_n_cut"] = n
    return out


def _etas(step):
    n = int(round(1.0 / step))
    if abs(n * step - 1.0) > 1e-9:
        raise UsageError("--eta-step must divide 1")
    return [round(k * step, 12) for k in range(n + 1)]


def _non_decreasing(vals, tol=1e-12):
    return all(b >= a - tol for a, b in zip(vals, vals[1:]))


def cmd_noise_sweep(cfg):
    if cfg.kind != "qubit":
        raise UsageError("noise-sweep needs --kind qubit")
    _need(cfg, "alpha", "beta")
    _real(cfg, "alpha", "beta")
    a, b = cfg.alpha.real, cfg.beta.real
    if a == b:
        raise UsageError("noise-sweep needs alpha != beta")
    if cfg.mu != 1.0:
        raise UsageError("noise-sweep closed forms assume --mu 1")
    rows = []
    for eta in _etas(cfg.eta_step):
        nz = apply_noise(a, b, eta)
        c_closed = concurrence_noisy_closed(nz.p, eta)
        c_w = concurrence_wootters(noisy_two_mode_density(a, b, eta))
        _, sep = _peak_report(noisy_reduced_kernel(nz))
        rows.append((eta, c_closed, c_w, sep))
    buf = io.StringIO()
    buf.write("eta,concurrence_closed,concurrence_wootters,peak_separation\n")
    for r in rows:
        buf.write(",".join(repr(float(v)) for v in r) + "\n")
    footer = {
        "command": "noise-sweep",
        "params": {"kind": "qubit", "alpha": a, "beta": b, "mu": 1.0, "eta_step": cfg.eta_step},
        "rows": len(rows),
        "concurrence_non_decreasing": _non_decreasing([r[1] for r in rows]),
        "separation_non_decreasing": _non_decreasing([r[3] for r in rows]),
        "max_closed_wootters_deviation": max(abs(r[1] - r[2]) for r in rows),
    }
    _emit(cfg, buf.getvalue(), dump_json(footer))
    return 0


def _terms_json(terms):
    return [{"coeff": c, "amp": a} for c, a in terms]


def cmd_protocol(cfg):
    alpha = cfg.alpha if cfg.alpha is not None else 1.0
    try:
        pc = ProtocolConfig(cfg.epsilons, alpha)
        res = run_cavity_protocol(pc)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    terms = sorted(res.state.terms, key=lambda t: (-t.amp.real, -t.amp.imag))
    ref = abs(terms[0].coeff)
    report = {
        "command": "protocol",
        "params": {"epsilons": list(pc.epsilons), "alpha": pc.alpha, "steps": pc.steps},
        "superposition": _terms_json(res.state.terms),
        "weights": [abs(t.coeff) / ref for t in terms],
        "weight_amplitudes": [t.amp for t in terms],
        "probability": res.probability,
        "history": [
            {"stage": name, "g": _terms_json(st.g_branch), "e": _terms_json(st.e_branch)} for name, st in res.history
        ],
    }
    if cfg.beta is not None:
        # phase shift by pi, displace, and split on a 50-50 beam splitter
        field_state = apply_displacement(apply_phase_shifter(res.state, math.pi), cfg.beta)
        ecs = apply_beamsplitter(with_vacuum(field_state), math.pi / 4).normalize()
        report["final_ecs"] = [{"coeff": c, "amp1": a, "amp2": b} for c, a, b in ecs.terms]
    _write(cfg.json_path or cfg.out, dump_json(report))
    return 0


def cmd_verify(cfg):
    results = verify.run_all(n_cut=cfg.n_cut)
    failed = [r.name for r in results if not r.passed]
    report = {
        "command": "verify",
        "n_cut": cfg.n_cut,
        "checks": [{"name": r.name, "deviation": r.deviation, "tol": r.tol, "passed": r.passed, "detail": r.detail} for r in results],
        "failed": failed,
        "passed": not failed,
    }
    _write(cfg.json_path or cfg.out, dump_json(report))
    for name in failed:
        print(f"FAILED: {name}", file=sys.stderr)
    return 1 if failed else 0


COMMANDS = {
    "wigner": cmd_wigner,
    "peaks": cmd_peaks,
    "concurrence": cmd_concurrence,
    "noise-sweep": cmd_noise_sweep,
    "protocol": cmd_protocol,
    "verify": cmd_verify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", choices=KINDS, default="qubit")
    common.add_argument("--alpha", type=parse_complex)
    common.add_argument("--beta", type=parse_complex)
    common.add_argument("--gamma", type=parse_complex)
    common.add_argument("--mu", type=_finite_float, default=1.0)
    common.add_argument("--mu1", type=_finite_float, default=1.0)
    common.add_argument("--mu2", type=_finite_float, default=1.0)
    common.add_argument("--eta", type=_finite_float)
    for name in ("xmin", "xmax", "ymin", "ymax"):
        common.add_argument(f"--{name}", type=_finite_float)
    common.add_argument("--step", type=_finite_float, default=0.05)
    common.add_argument("--oracle", action="store_true", help="cross-check against the Fock-space oracle")
    common.add_argument("--ncut", type=int, help="force the Fock cutoff used by the oracle")
    common.add_argument("--out", help="primary output file (default stdout)")
    common.add_argument("--json", dest="json_path", help="JSON summary file")

    parser = argparse.ArgumentParser(prog="ecswigner", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    w = sub.add_parser("wigner", parents=[common], help="Wigner grid as CSV plus a JSON summary")
    w.add_argument("--closed-form", action="store_true", help="evaluate the literal closed form instead of the kernel")
    w.add_argument("--workers", type=int, default=1)
    sub.add_parser("peaks", parents=[common], help="peaks along y = 0")
    sub.add_parser("concurrence", parents=[common], help="concurrence by every applicable route")
    ns = sub.add_parser("noise-sweep", parents=[common], help="concurrence and peak separation versus eta")
    ns.add_argument("--eta-step", type=_finite_float, default=0.05)
    pr = sub.add_parser("protocol", parents=[common], help="cavity protocol output")
    pr.add_argument("--eps", type=_eps_list, default=OPTIMAL_EPSILONS, help="comma-separated eps_0,...,eps_N")
    sub.add_parser("verify", parents=[common], help="run every closed-form versus oracle check")
    return parser


def config_from_args(args):
    grid = {"x_min": args.xmin, "x_max": args.xmax, "y_min": args.ymin, "y_max": args.ymax}
    return RunConfig(
        command=args.command,
        kind=args.kind,
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        mu=args.mu,
        mu1=args.mu1,
        mu2=args.mu2,
        eta=args.eta,
        grid={k: v for k, v in grid.items() if v is not None},
        step=args.step,
        oracle=args.oracle,
        n_cut=args.ncut,
        out=args.out,
        json_path=args.json_path,
        closed_form=getattr(args, "closed_form", False),
        workers=getattr(args, "workers", 1),
        eta_step=getattr(args, "eta_step", 0.05),
        epsilons=getattr(args, "eps", OPTIMAL_EPSILONS),
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args).validate()
        return COMMANDS[cfg.command](cfg)
    except (UsageError, DegenerateBasisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
