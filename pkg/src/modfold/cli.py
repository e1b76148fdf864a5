"""Command line entry points: simulate, sweep, noise-analysis."""

import argparse
import sys

from . import harness
from .errors import ModfoldError


def _parse_values(text: str):
    return [float(v) for v in text.replace(",", " ").split()]


def _parse_range(text: str):
    # "1..12" or a comma/space separated list
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(float(v)) for v in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modfold",
        description="Modulo-ADC full-duplex receiver simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one configured experiment")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", default="-", help="trial CSV path (default stdout)")
    sim.add_argument("--dump-waveforms", default=None,
                     help="write aligned per-sample traces of trial 0")

    swp = sub.add_parser("sweep", help="sweep one scalar config field")
    swp.add_argument("--config", required=True)
    swp.add_argument("--axis", required=True)
    swp.add_argument("--values", required=True,
                     help="comma or space separated values")
    swp.add_argument("--out", required=True)

    noise = sub.add_parser("noise-analysis",
                           help="quantization-noise curves for a zeta")
    noise.add_argument("--zeta", type=float, required=True)
    noise.add_argument("--bits", required=True,
                       help="range 'lo..hi' or value list")
    noise.add_argument("--dr", default="1",
                       help="dynamic-range multipliers (list)")
    noise.add_argument("--mc-samples", type=int, default=0)
    noise.add_argument("--seed", type=int, default=0)
    noise.add_argument("--out", required=True)
    return parser


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            cfg = harness.load_config(args.config)
            if args.dump_waveforms:
                reports, wf = harness.run_experiment(cfg, keep_waveforms=True)
                if wf is None:
                    raise ModfoldError("trial 0 failed; no waveforms to dump")
                _write(args.dump_waveforms, harness.waveforms_csv(wf))
            else:
                reports = harness.run_experiment(cfg)
            _write(args.out, harness.trials_csv(reports))
        elif args.command == "sweep":
            cfg = harness.load_config(args.config)
            _write(args.out, harness.sweep(cfg, args.axis,
                                           _parse_values(args.values)))
        elif args.command == "noise-analysis":
            _write(args.out, harness.noise_analysis_csv(
                args.zeta, _parse_range(args.bits),
                _parse_values(args.dr), args.mc_samples, args.seed))
    except (ModfoldError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
