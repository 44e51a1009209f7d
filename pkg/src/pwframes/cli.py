"""``pwframes lattice|reconstruct|sweep --config <path> --out <dir> [--seed N]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (
    EXIT_CONFIG,
    EXIT_UNCERTIFIED,
    ConfigError,
    ExperimentConfig,
    cmd_lattice,
    cmd_reconstruct,
    cmd_sweep,
)
from .spectral import DomainError

COMMANDS = {"lattice": cmd_lattice, "reconstruct": cmd_reconstruct, "sweep": cmd_sweep}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwframes",
        description="Sample and reconstruct bandlimited functions with frame methods.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, type=Path, help="experiment config (JSON)")
    parser.add_argument("--out", required=True, type=Path, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args.config).with_seed(args.seed)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        code = COMMANDS[args.command](cfg, args.out)
    except (DomainError, ValueError) as exc:
        # constraints that only surface once the pipeline runs (e.g. mass bounds)
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if code == EXIT_UNCERTIFIED:
        print("frame not certified: no positive lower frame bound (see report.json)", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
