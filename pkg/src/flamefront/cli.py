"""Command-line front end: bifurcation reports, branch runs, stability probes.

Output files are deterministic: floats are serialized with 17 significant
digits, iteration order is fixed, and the only wall-clock content is the
timestamp inside manifest.json.  The output directory is taken from
--out, else the FLAMEFRONT_OUT environment variable, else the working
directory.

Exit codes: 0 success, 2 usage error, 3 solver failure, 4 unsupported
model.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, bifurcation, evolution, solver, spectral
from .errors import (
    BlowUpError,
    BranchStartError,
    ConvergenceError,
    DegenerateFrontError,
    SingularSystemError,
    UnsupportedModelError,
)
from .geometry import reconstruct_curve
from .model import ModelKind, WaveParams, length_from_theta, residual

__all__ = ["main"]

_USAGE_ERROR = 2
_SOLVER_ERROR = 3
_UNSUPPORTED_MODEL = 4


def _format_value(value):
    if isinstance(value, bool) or value is None:
        return "true" if value is True else "false" if value is False else "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


def _to_json(obj, indent=0):
    """Deterministic JSON with 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq):
            return "[" + ", ".join(_format_value(v) for v in seq) + "]"
        items = [f"{inner}{_to_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return _format_value(obj)


def _write_json(path, obj):
    path.write_text(_to_json(obj) + "\n")


def _out_dir(args):
    if args.out is not None:
        base = Path(args.out)
    elif os.environ.get("FLAMEFRONT_OUT"):
        base = Path(os.environ["FLAMEFRONT_OUT"])
    else:
        base = Path.cwd()
    base.mkdir(parents=True, exist_ok=True)
    return base


def _write_manifest(out, command, parameters, outputs):
    manifest = {
        "command": command,
        "parameters": parameters,
        "artifact_version": __version__,
        "outputs": outputs,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    _write_json(out / "manifest.json", manifest)


def _model_kind(name):
    return ModelKind(name)


def cmd_bifurcate(args):
    kind = _model_kind(args.model)
    out = _out_dir(args)
    report = {"model": kind.value, "k0": args.k0}
    if kind is ModelKind.LINEAR:
        alpha0 = bifurcation.linear_bifurcation_alpha(args.k0)
        report["alpha0"] = alpha0
        print(f"linear closure, k0={args.k0}: alpha0 = {alpha0}")
    else:
        cert = bifurcation.root_certificate(args.k0)
        report.update(
            {
                "alpha0": cert.alpha0,
                "q_at_root": cert.q_at_root,
                "bracket": list(cert.bracket),
                "discriminant": cert.discriminant,
                "resultant": cert.resultant,
            }
        )
        print(f"nonlinear closure, k0={args.k0}: alpha0 = {cert.alpha0:.10g}")
        print(f"  discriminant = {cert.discriminant:.10g} (< 0: real root is unique)")
        print(f"  resultant    = {cert.resultant:.10g} (> 0: root is simple)")
    _write_json(out / "bifurcation.json", report)
    _write_manifest(
        out,
        "bifurcate",
        {"model": kind.value, "k0": args.k0},
        ["bifurcation.json"],
    )
    return 0


def _wave_payload(sol, alpha0):
    curve = reconstruct_curve(sol.theta)
    return {
        "model": sol.kind.value,
        "k0": sol.k0,
        "h": sol.amplitude,
        "alpha": sol.alpha,
        "beta": sol.beta,
        "L": sol.length,
        "delta_alpha": sol.alpha - alpha0,
        "delta_beta": sol.beta - 1.0,
        "delta_L": sol.length - 2.0 * np.pi,
        "residual_norm": sol.residual_norm,
        "sigma": spectral.grid(sol.theta.nx),
        "theta": sol.theta.values,
        "x": curve.x,
        "y": curve.y,
    }


def cmd_branch(args):
    kind = _model_kind(args.model)
    out = _out_dir(args)
    h_step = args.h_step
    if h_step is None:
        h_step = 0.02 if kind is ModelKind.NONLINEAR else 0.05
    cfg = solver.SolveConfig(nx=args.nx)
    record = solver.continue_branch(args.k0, kind, h_step, args.h_max, cfg)
    if kind is ModelKind.LINEAR:
        alpha0 = float(bifurcation.linear_bifurcation_alpha(args.k0))
    else:
        alpha0 = bifurcation.nonlinear_bifurcation_alpha(args.k0)

    outputs = ["branch.csv"]
    rows = ["h,alpha,beta,L,delta_alpha,delta_beta,delta_L,residual_norm"]
    for sol in record.solutions:
        fields = (
            sol.amplitude,
            sol.alpha,
            sol.beta,
            sol.length,
            sol.alpha - alpha0,
            sol.beta - 1.0,
            sol.length - 2.0 * np.pi,
            sol.residual_norm,
        )
        rows.append(",".join(format(v, ".17g") for v in fields))
        name = f"wave_{sol.amplitude:.6f}.json"
        _write_json(out / name, _wave_payload(sol, alpha0))
        outputs.append(name)
    (out / "branch.csv").write_text("\n".join(rows) + "\n")
    _write_manifest(
        out,
        "branch",
        {
            "model": kind.value,
            "k0": args.k0,
            "h_step": h_step,
            "h_max": args.h_max,
            "nx": args.nx,
        },
        outputs,
    )
    print(
        f"{len(record.solutions)} wave(s) on the {kind.value} k0={args.k0} branch; "
        f"terminated: {record.termination}"
    )
    return 0


def _wave_from_file(path):
    with open(path) as fh:
        data = json.load(fh)
    kind = ModelKind(data.get("model", "linear"))
    theta = spectral.ThetaProfile.from_values(np.asarray(data["theta"], dtype=float))
    length = float(data.get("L", length_from_theta(theta)))
    beta = float(data.get("beta", 1.0))
    alpha = float(data["alpha"])
    residual_norm = float(
        data.get(
            "residual_norm",
            np.max(np.abs(residual(theta, WaveParams(alpha, beta, length), kind)))
            if kind is ModelKind.LINEAR
            else 0.0,
        )
    )
    return solver.WaveSolution(
        theta=theta,
        alpha=alpha,
        beta=beta,
        length=length,
        amplitude=float(np.max(theta.values)),
        residual_norm=residual_norm,
        k0=int(data.get("k0", 1)),
        kind=kind,
    )


def cmd_stability(args):
    wave = _wave_from_file(args.wave)
    out = _out_dir(args)
    cfg = evolution.StabilityProbeConfig(
        delta=args.delta, dt=args.dt, t_max=args.t_max
    )
    estimate = evolution.stability_probe(wave, cfg)
    lines = ["t,d"]
    for t, d in zip(estimate.times, estimate.norms):
        lines.append(f"{t:.17g},{d:.17g}")
    (out / "growth.csv").write_text("\n".join(lines) + "\n")
    fit = {
        "slope": estimate.rate,
        "intercept": estimate.intercept,
        "window": list(estimate.window),
        "observed": estimate.observed,
    }
    if estimate.note:
        fit["note"] = estimate.note
    _write_json(out / "fit.json", fit)
    _write_manifest(
        out,
        "stability",
        {
            "wave": str(args.wave),
            "delta": args.delta,
            "dt": args.dt,
            "t_max": args.t_max,
        },
        ["growth.csv", "fit.json"],
    )
    print(
        f"growth rate = {estimate.rate:.6g} over t in "
        f"[{estimate.window[0]:.6g}, {estimate.window[1]:.6g}]"
    )
    if estimate.note:
        print(estimate.note)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="flamefront",
        description="Traveling waves of coordinate-free flame front models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default=None, help="output directory")

    p_bif = sub.add_parser("bifurcate", help="report a flat-front bifurcation point")
    p_bif.add_argument("--model", choices=["linear", "nonlinear"], required=True)
    p_bif.add_argument("--k0", type=int, required=True, help="destabilized mode number")
    add_common(p_bif)
    p_bif.set_defaults(func=cmd_bifurcate)

    p_br = sub.add_parser("branch", help="continue a traveling-wave branch in amplitude")
    p_br.add_argument("--model", choices=["linear", "nonlinear"], required=True)
    p_br.add_argument("--k0", type=int, required=True)
    p_br.add_argument("--h-step", type=float, default=None, dest="h_step")
    p_br.add_argument("--h-max", type=float, default=10.0, dest="h_max")
    p_br.add_argument("--nx", type=int, default=256)
    add_common(p_br)
    p_br.set_defaults(func=cmd_branch)

    p_st = sub.add_parser("stability", help="probe a wave file for instability growth")
    p_st.add_argument("--wave", required=True, help="wave JSON file to perturb")
    p_st.add_argument("--delta", type=float, default=1e-8)
    p_st.add_argument("--dt", type=float, default=1e-4)
    p_st.add_argument("--t-max", type=float, default=1.0, dest="t_max")
    add_common(p_st)
    p_st.set_defaults(func=cmd_stability)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k0", 1) < 1:
        parser.error(f"--k0 must be a positive integer, got {args.k0}")
    if args.command == "branch":
        h_step = args.h_step
        if h_step is not None and h_step <= 0.0:
            parser.error("--h-step must be positive")
        first = h_step if h_step is not None else (0.02 if args.model == "nonlinear" else 0.05)
        if args.h_max < first:
            parser.error("--h-max is below the first amplitude target; nothing to do")
    if args.command == "stability" and not Path(args.wave).is_file():
        parser.error(f"wave file not found: {args.wave}")
    try:
        return args.func(args)
    except UnsupportedModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _UNSUPPORTED_MODEL
    except (
        BranchStartError,
        ConvergenceError,
        SingularSystemError,
        DegenerateFrontError,
        BlowUpError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _SOLVER_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
