"""Command-line entry point: ``lindblad-twophoton --preset fig3 --output fig3.csv``."""

import argparse
import sys
from dataclasses import replace

from .errors import InvalidDimensionError, InvalidModelError, LindbladError
from .experiment import PRESETS, ConfigError, emit_csv, load_config, preset, preset_json, run

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lindblad-twophoton",
        description="Run qubit/oscillator scenarios and write the results as CSV.",
    )
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in figure scenario")
    src.add_argument("--config", metavar="PATH", help="scenario file (key = value or JSON)")
    src.add_argument("--show-preset", choices=sorted(PRESETS), metavar="NAME",
                     help="print a preset's parameters as JSON and exit")
    parser.add_argument("--output", metavar="PATH", help="CSV destination (default: stdout)")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    parser.add_argument("--full-every", type=int, metavar="K",
                        help="full-model points on every K-th grid point")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.show_preset:
        print(preset_json(args.show_preset))
        return EXIT_OK
    try:
        cfg = preset(args.preset) if args.preset else load_config(args.config)
        if args.full_every is not None:
            if args.full_every < 1:
                raise ConfigError("must be >= 1", key="full-every")
            cfg = replace(cfg, full_every=args.full_every)
        if args.threads < 1:
            raise ConfigError("must be >= 1", key="threads")
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    output = args.output or cfg.output
    try:
        table = run(cfg, threads=args.threads)
    except (InvalidModelError, InvalidDimensionError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except LindbladError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    try:
        text = emit_csv(table, output)
    except OSError as exc:
        print(f"error: cannot write {output}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if output is None:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
