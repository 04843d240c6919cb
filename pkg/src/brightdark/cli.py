"""Command-line entry point.

Subcommands: decompose | mzi-scan | evolve | gate. Every run writes its
output file plus a JSON parameters sidecar (<out>.params.json) carrying the
fully resolved argument list, so the run can be replayed byte-for-byte.

Exit codes: 0 ok, 2 usage or malformed spec, 3 truncation leakage above
tolerance, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .collective import build_mixer, decompose, two_mode_mixer
from .dynamics import (
    DensityOperator,
    IntegratorError,
    SystemParams,
    lindblad_evolve,
    semiclassical_evolve,
)
from .fock import HilbertConfig
from .gates import GateParams, cphase_truth_table, mode_rotation, validate_effective
from .interferometer import ClassicalField, fringe_scan
from .states import (
    StateSpecError,
    parse_angle,
    parse_state_spec,
    spec_mode_count,
)
from .collective import collective_state
from .fock import fidelity

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LEAKAGE = 3
EXIT_NUMERICAL = 4


class LeakageError(RuntimeError):
    """Truncation residual above the requested tolerance."""


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except StateSpecError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brightdark",
        description="collective bright/dark states of light: decompositions, "
        "interference scans, dissipative dynamics and dispersive gates",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None, help="output file path")
    common.add_argument("--seed", type=int, default=None,
                        help="reserved; no stochastic code paths use it yet")

    p_dec = sub.add_parser("decompose", parents=[common],
                           help="project a state onto the collective basis")
    p_dec.add_argument("--state", required=True, help="state spec string")
    p_dec.add_argument("--cutoff", type=int, default=12)
    p_dec.add_argument("--mixer", choices=["auto", "cd", "sylvester", "helmert"],
                       default="auto")
    p_dec.add_argument("--leak-tol", type=float, default=1e-6,
                       help="exit 3 if constructor loss + residual exceeds this")
    p_dec.add_argument("--format", choices=["json"], default="json")

    p_mzi = sub.add_parser("mzi-scan", parents=[common],
                           help="interferometer fringe over a phase grid")
    src = p_mzi.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", help="quantum input state spec")
    src.add_argument("--classical", help="theta=<angle>,intensity=<I>")
    p_mzi.add_argument("--cutoff", type=int, default=12)
    p_mzi.add_argument("--steps", type=int, default=101)
    p_mzi.add_argument("--phi-min", type=_angle, default=0.0)
    p_mzi.add_argument("--phi-max", type=_angle, default=2 * np.pi)
    p_mzi.add_argument("--format", choices=["csv", "json"], default="csv")

    p_ev = sub.add_parser("evolve", parents=[common],
                          help="master-equation or semiclassical trajectory")
    p_ev.add_argument("--state", default="coherent:0.70710678118654752,0;-0.70710678118654752,0")
    p_ev.add_argument("--atom", choices=["g", "e"], default="g")
    p_ev.add_argument("--model", choices=["quantum", "semiclassical"], default="quantum")
    p_ev.add_argument("--alpha-c", default="0",
                      help="semiclassical initial amplitude, re[,im]")
    p_ev.add_argument("--cutoff", type=int, default=10)
    p_ev.add_argument("--g", type=float, default=1.0)
    p_ev.add_argument("--gamma", type=float, default=1.0)
    p_ev.add_argument("--kappa", type=float, default=0.01)
    p_ev.add_argument("--delta", type=float, default=0.0)
    p_ev.add_argument("--t-max", type=float, default=10.0)
    p_ev.add_argument("--samples", type=int, default=501)
    p_ev.add_argument("--no-convergence-check", action="store_true",
                      help="skip the half-step convergence rerun")
    p_ev.add_argument("--format", choices=["csv", "json"], default="csv")

    p_gate = sub.add_parser("gate", parents=[common],
                            help="controlled-phase truth table and validation")
    p_gate.add_argument("--xi", type=_angle, default=np.pi)
    p_gate.add_argument("--g", type=float, default=1.0)
    p_gate.add_argument("--delta-over-g", type=float, default=None,
                        help="also validate against the full detuned model")
    p_gate.add_argument("--rotate", default=None,
                        help="theta=<angle>: report a bright/dark rotation")
    p_gate.add_argument("--cutoff", type=int, default=2)
    p_gate.add_argument("--format", choices=["json"], default="json")

    return parser


def _default_out(command: str, fmt: str) -> Path:
    ext = {"json": "json", "csv": "csv"}[fmt]
    name = command.replace("-", "_")
    return Path(f"{name}.{ext}")


def _write(path: Path, body: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(body)


def _write_sidecar(path: Path, command: str, resolved: dict, extra: dict | None = None):
    reproduce = [command]
    for key, value in resolved.items():
        flag = "--" + key.replace("_", "-")
        if value is None or value is False:
            continue
        if value is True:
            reproduce.append(flag)
        else:
            reproduce.extend([flag, str(value)])
    sidecar = {
        "package": "brightdark",
        "version": __version__,
        "command": command,
        "parameters": resolved,
        "reproduce": reproduce,
    }
    if extra:
        sidecar["results"] = extra
    _write(Path(str(path) + ".params.json"),
           json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def _pick_mixer(kind: str, mode_count: int):
    if kind == "auto":
        kind = "cd" if mode_count == 2 else (
            "sylvester" if mode_count & (mode_count - 1) == 0 else "helmert")
    if kind == "cd":
        if mode_count != 2:
            raise StateSpecError("the cd mixer is the two-mode convention")
        return kind, two_mode_mixer()
    return kind, build_mixer(mode_count, kind)


def cmd_decompose(args) -> int:
    modes = spec_mode_count(args.state)
    config = HilbertConfig(mode_count=modes, cutoff=args.cutoff, atom_levels=1)
    state = parse_state_spec(config, args.state)
    mixer_kind, mixer = _pick_mixer(args.mixer, modes)
    decomposition = decompose(state.normalized(), mixer)
    out = args.out or _default_out("decompose", "json")
    _write(out, decomposition.to_json() + "\n")
    resolved = {
        "state": args.state,
        "cutoff": args.cutoff,
        "mixer": mixer_kind,
        "leak_tol": args.leak_tol,
        "format": "json",
        "out": str(out),
    }
    leak = state.truncation_loss + decomposition.residual
    _write_sidecar(out, "decompose", resolved, {
        "dark_weight": decomposition.dark_weight,
        "mss_weight": decomposition.mss_weight,
        "residual": decomposition.residual,
        "constructor_loss": state.truncation_loss,
    })
    if leak > args.leak_tol:
        raise LeakageError(
            f"truncation leakage {leak:.3e} exceeds tolerance {args.leak_tol:.1e}; "
            f"raise --cutoff"
        )
    return EXIT_OK


def _parse_classical(text: str) -> tuple[ClassicalField, dict]:
    fields = dict(part.split("=", 1) for part in text.split(","))
    unknown = set(fields) - {"theta", "intensity"}
    if unknown:
        raise StateSpecError(f"unknown classical field keys {sorted(unknown)}")
    theta = parse_angle(fields.get("theta", "0"))
    intensity = float(fields.get("intensity", "1"))
    if intensity < 0:
        raise StateSpecError("intensity must be non-negative")
    omega = np.sqrt(intensity)
    return (
        ClassicalField(omega, omega * np.exp(1j * theta)),
        {"theta": theta, "intensity": intensity},
    )


def cmd_mzi_scan(args) -> int:
    if args.steps < 1:
        raise StateSpecError("--steps must be >= 1")
    phis = np.linspace(args.phi_min, args.phi_max, args.steps)
    if args.classical is not None:
        source, source_info = _parse_classical(args.classical)
    else:
        config = HilbertConfig(mode_count=2, cutoff=args.cutoff, atom_levels=1)
        source = parse_state_spec(config, args.state).normalized()
        source_info = {"state": args.state, "cutoff": args.cutoff}
    scan = fringe_scan(source, phis)
    out = args.out or _default_out("mzi-scan", args.format)
    if args.format == "csv":
        _write(out, scan.csv_body())
    else:
        _write(out, json.dumps({
            "phi": scan.phis.tolist(),
            "nA": scan.n_a.tolist(),
            "nB": scan.n_b.tolist(),
        }, indent=2, sort_keys=True) + "\n")
    resolved = {
        "state": args.state,
        "classical": args.classical,
        "cutoff": args.cutoff if args.classical is None else None,
        "steps": args.steps,
        "phi_min": args.phi_min,
        "phi_max": args.phi_max,
        "format": args.format,
        "out": str(out),
    }
    _write_sidecar(out, "mzi-scan", resolved, {**scan.summary(), **source_info})
    return EXIT_OK


def cmd_evolve(args) -> int:
    if args.samples < 2:
        raise StateSpecError("--samples must be >= 2")
    t_grid = np.linspace(0.0, args.t_max, args.samples)
    params = SystemParams(g=args.g, gamma=args.gamma, kappa=args.kappa,
                          delta=args.delta)
    if args.model == "semiclassical":
        parts = args.alpha_c.replace("−", "-").split(",")
        alpha_c0 = complex(float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0)
        series = semiclassical_evolve(params, alpha_c0, args.atom, t_grid)
    else:
        config = HilbertConfig(mode_count=2, cutoff=args.cutoff, atom_levels=2)
        atom_level = {"g": 0, "e": 1}[args.atom]
        # the evolve cutoff default is sized for a 1e-8 darkness budget
        state = parse_state_spec(
            config, args.state, atom_level=atom_level, coherent_tolerance=1e-8
        )
        rho0 = DensityOperator.from_state(state)
        series = lindblad_evolve(
            config, params, rho0, t_grid,
            convergence_check=not args.no_convergence_check,
        )
    out = args.out or _default_out("evolve", args.format)
    if args.format == "csv":
        _write(out, series.csv_body())
    else:
        payload = {"t": series.times.tolist()}
        for name in series.column_order():
            values = series.channels[name]
            if name == "alpha_c":
                payload["alpha_c_re"] = np.real(values).tolist()
                payload["alpha_c_im"] = np.imag(values).tolist()
            else:
                payload[name] = np.real(values).tolist()
        _write(out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    resolved = {
        "state": args.state if args.model == "quantum" else None,
        "atom": args.atom,
        "model": args.model,
        "alpha_c": args.alpha_c if args.model == "semiclassical" else None,
        "cutoff": args.cutoff if args.model == "quantum" else None,
        "g": args.g,
        "gamma": args.gamma,
        "kappa": args.kappa,
        "delta": args.delta,
        "t_max": args.t_max,
        "samples": args.samples,
        "no_convergence_check": args.no_convergence_check,
        "format": args.format,
        "out": str(out),
    }
    _write_sidecar(out, "evolve", resolved, {"model": series.meta.get("model")})
    return EXIT_OK


def cmd_gate(args) -> int:
    params = GateParams.from_xi(
        args.xi, g=args.g,
        delta_over_g=args.delta_over_g if args.delta_over_g is not None else 50.0,
    )
    report: dict = {
        "xi": params.xi,
        "g": params.g,
        "delta": params.delta,
        "time": params.t,
        "truth_table": [e.to_dict() for e in cphase_truth_table(params, args.cutoff)],
    }
    if args.delta_over_g is not None:
        report["validation"] = validate_effective(
            args.delta_over_g, g=args.g, cutoff=args.cutoff
        ).to_dict()
    if args.rotate is not None:
        fields = dict(part.split("=", 1) for part in args.rotate.split(","))
        theta = parse_angle(fields["theta"])
        config = HilbertConfig(mode_count=2, cutoff=max(args.cutoff, 1), atom_levels=1)
        bright_in = collective_state(config, (1, 0))
        rotated = mode_rotation(bright_in, theta)
        report["rotation"] = {
            "theta": theta,
            "fidelity_bright": fidelity(rotated, bright_in),
            "fidelity_dark": fidelity(rotated, collective_state(config, (0, 1))),
        }
    out = args.out or _default_out("gate", "json")
    _write(out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    resolved = {
        "xi": args.xi,
        "g": args.g,
        "delta_over_g": args.delta_over_g,
        "rotate": args.rotate,
        "cutoff": args.cutoff,
        "format": "json",
        "out": str(out),
    }
    _write_sidecar(out, "gate", resolved)
    return EXIT_OK


_COMMANDS = {
    "decompose": cmd_decompose,
    "mzi-scan": cmd_mzi_scan,
    "evolve": cmd_evolve,
    "gate": cmd_gate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StateSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LeakageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LEAKAGE
    except IntegratorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
