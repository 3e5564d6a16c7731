"""Command-line front end.

Subcommands::

    sweep    phase-sweep an n-unit chain, write the trace CSV, print analysis
    circuit  compile an .icd netlist, sweep it, write the trace CSV
    analyze  re-analyze an existing trace CSV
    noise    Monte Carlo phase-jitter ensemble, write the noisy trace CSV
    equiv    compare the two-input splitter picture with the MZI picture

Exit codes: 0 success, 2 usage error, 3 circuit parse error, 4 validation or
numeric error.  Every subcommand that writes a CSV also writes a
``<out>.manifest`` sidecar listing ``key=value`` pairs (tool version,
subcommand, and all resolved parameters) from which the run can be repeated
byte for byte via :func:`rerun_from_manifest`.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    analyze_trace,
    format_float,
    g2_trace,
    g2_trace_from_matrix,
    read_trace_csv,
    write_trace_csv,
)
from .dsl import CircuitSyntaxError, compile_circuit, parse
from .elements import ChainConfig, bs_anticorrelation, d_block
from .errors import ValidationError
from .linalg import apply, field_pair, intensities
from .noise import (
    JITTER_MODES,
    NoiseConfig,
    anticorrelation_error_rate,
    run_noise_ensemble,
    write_noisy_trace_csv,
)

_TWO_PI = 2.0 * math.pi


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _unsigned_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _add_sweep_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--samples", type=_positive_int, default=4096,
                     help="grid points per sweep (default 4096)")
    sub.add_argument("--window", type=float, default=_TWO_PI,
                     help="swept phase width in radians (default 2*pi)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbwsim",
        description="Coherence photonic de Broglie wave simulator (cascaded MZI chains).",
    )
    parser.add_argument("--version", action="version", version=f"pbwsim {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sweep = subs.add_parser("sweep", help="sweep an n-unit chain and analyze the fringe")
    sweep.add_argument("--n", type=_positive_int, default=1, help="number of chain units")
    sweep.add_argument("--eta", type=float, default=1.0,
                       help="per-interface amplitude transmission in (0, 1]")
    _add_sweep_flags(sweep)
    sweep.add_argument("--out", default="trace.csv", help="trace CSV path")
    sweep.set_defaults(func=cmd_sweep)

    circuit = subs.add_parser("circuit", help="sweep a circuit described by an .icd netlist")
    circuit.add_argument("--file", required=True, help="netlist file (.icd)")
    _add_sweep_flags(circuit)
    circuit.add_argument("--out", default="trace.csv", help="trace CSV path")
    circuit.set_defaults(func=cmd_circuit)

    analyze = subs.add_parser("analyze", help="analyze an existing trace CSV")
    analyze.add_argument("--in", dest="in_path", required=True, help="trace CSV path")
    analyze.set_defaults(func=cmd_analyze)

    noise = subs.add_parser("noise", help="Monte Carlo phase-jitter ensemble")
    noise.add_argument("--n", type=_positive_int, default=1, help="number of chain units")
    noise.add_argument("--eta", type=float, default=1.0,
                       help="per-interface amplitude transmission in (0, 1]")
    noise.add_argument("--sigma", type=float, required=True,
                       help="std. dev. of the Gaussian phase jitter, radians")
    noise.add_argument("--trials", type=_positive_int, default=1000, help="ensemble size")
    noise.add_argument("--seed", type=_unsigned_int, default=0, help="Philox stream seed")
    noise.add_argument("--mode", choices=JITTER_MODES, default=JITTER_MODES[0],
                       help="jitter correlation mode")
    _add_sweep_flags(noise)
    noise.add_argument("--out", default="noise_trace.csv", help="noisy trace CSV path")
    noise.set_defaults(func=cmd_noise)

    equiv = subs.add_parser(
        "equiv", help="splitter picture at psi vs MZI picture at pi/2 - psi"
    )
    equiv.add_argument("--psi", type=float, required=True,
                       help="relative phase between the two splitter inputs, radians")
    equiv.set_defaults(func=cmd_equiv)
    return parser


def _print_kv(key: str, value):
    if isinstance(value, float):
        value = format_float(value)
    print(f"{key}={value}")


def _print_analysis(result):
    _print_kv("period_phase", result.period_phase)
    _print_kv("visibility", result.visibility)
    _print_kv("lambda_ratio", result.lambda_ratio)
    _print_kv("inferred_n", result.inferred_n)
    _print_kv("equivalent_photon_number", result.equivalent_photon_number)


def _manifest_text(subcommand: str, params: dict) -> str:
    lines = [f"version={__version__}", f"subcommand={subcommand}"]
    for key, value in params.items():
        if isinstance(value, float):
            value = repr(value)
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def _write_manifest(out_path: str, subcommand: str, params: dict):
    with open(str(out_path) + ".manifest", "w", encoding="utf-8", newline="") as f:
        f.write(_manifest_text(subcommand, params))


def read_manifest(path) -> dict:
    """Parse a manifest sidecar back into its key=value map."""
    manifest = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        if "=" not in line:
            raise ValidationError(f"{path}: line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        manifest[key] = value
    return manifest


def manifest_argv(manifest: dict) -> list:
    """Rebuild the argument vector recorded in a manifest."""
    manifest = dict(manifest)
    manifest.pop("version", None)
    try:
        argv = [manifest.pop("subcommand")]
    except KeyError:
        raise ValidationError("manifest has no subcommand entry") from None
    for key, value in manifest.items():
        argv.extend([f"--{key}", value])
    return argv


def rerun_from_manifest(path) -> int:
    """Repeat the run recorded in a manifest sidecar (byte-identical output)."""
    return main(manifest_argv(read_manifest(path)))


def cmd_sweep(args) -> int:
    cfg = ChainConfig(n=args.n, eta=args.eta)
    trace = g2_trace(cfg, args.samples, args.window)
    result = analyze_trace(trace, cfg.lambda0)
    write_trace_csv(trace, args.out)
    _write_manifest(args.out, "sweep", {
        "n": args.n, "eta": args.eta,
        "samples": args.samples, "window": args.window, "out": args.out,
    })
    _print_kv("out", args.out)
    _print_analysis(result)
    return 0


def cmd_circuit(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    circuit = parse(text)
    trace = g2_trace_from_matrix(
        lambda phi: compile_circuit(circuit, phi),
        args.samples,
        args.window,
        meta={"circuit": args.file},
    )
    result = analyze_trace(trace)
    write_trace_csv(trace, args.out)
    _write_manifest(args.out, "circuit", {
        "file": args.file, "samples": args.samples, "window": args.window, "out": args.out,
    })
    _print_kv("out", args.out)
    _print_analysis(result)
    return 0


def cmd_analyze(args) -> int:
    trace = read_trace_csv(args.in_path)
    _print_analysis(analyze_trace(trace))
    return 0


def cmd_noise(args) -> int:
    cfg = ChainConfig(n=args.n, eta=args.eta)
    noise = NoiseConfig(sigma=args.sigma, trials=args.trials, seed=args.seed, mode=args.mode)
    trace = run_noise_ensemble(cfg, noise, args.samples, args.window)
    error_rate = anticorrelation_error_rate(cfg, noise, basis_phi=0.0)
    write_noisy_trace_csv(trace, args.out)
    _write_manifest(args.out, "noise", {
        "n": args.n, "eta": args.eta, "sigma": args.sigma,
        "trials": args.trials, "seed": args.seed, "mode": args.mode,
        "samples": args.samples, "window": args.window, "out": args.out,
    })
    _print_kv("out", args.out)
    _print_kv("visibility", trace.visibility)
    _print_kv("anticorrelation_error_rate", error_rate)
    _print_kv("error_rate_basis_phi", 0.0)
    return 0


def cmd_equiv(args) -> int:
    bs_pair = intensities(bs_anticorrelation(args.psi))
    mzi_phi = 0.5 * math.pi - args.psi
    mzi_pair = intensities(apply(d_block(mzi_phi), field_pair(1.0, 0.0)))
    diff = max(abs(bs_pair[0] - mzi_pair[0]), abs(bs_pair[1] - mzi_pair[1]))
    _print_kv("psi", args.psi)
    _print_kv("bs_i_upper", bs_pair[0])
    _print_kv("bs_i_lower", bs_pair[1])
    _print_kv("mzi_phi", mzi_phi)
    _print_kv("mzi_i_upper", mzi_pair[0])
    _print_kv("mzi_i_lower", mzi_pair[1])
    _print_kv("max_abs_difference", diff)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except CircuitSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
