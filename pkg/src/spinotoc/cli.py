"""Command-line entry point.

    spinotoc --config cfg.yaml [--output DIR] [--seed N] [--threads N]
             [--scenario NAME] [--no-plots]

Exit codes: 0 success, 1 config error, 2 dimension refusal, 3 numerical
validation failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from .config import ConfigError, SCENARIOS, parse_config
from .report import emit
from .scenarios import DimensionBudgetError, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIMENSION = 2
EXIT_VALIDATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinotoc",
        description="OTOC scenario runner for open and closed spin systems",
    )
    parser.add_argument("--config", required=True, help="path to a YAML scenario config")
    parser.add_argument("--output", default=None, help="output directory (overrides config)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (overrides config)")
    parser.add_argument(
        "--threads", type=int, default=1, help="worker threads; affects speed only"
    )
    parser.add_argument(
        "--scenario", default=None, choices=SCENARIOS, help="scenario (overrides config)"
    )
    parser.add_argument(
        "--no-plots", action="store_true", help="skip figure rendering, CSV only"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
        if args.scenario is not None:
            # override in the raw document so the new scenario's schema applies
            raw = yaml.safe_load(text) or {}
            raw["scenario"] = args.scenario
            text = yaml.safe_dump(raw)
        cfg = parse_config(text)
        if args.seed is not None:
            cfg.seed = args.seed
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    outdir = Path(args.output or cfg.output or f"runs/{cfg.scenario}")

    try:
        result = run_scenario(cfg, threads=args.threads)
    except DimensionBudgetError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ValueError as exc:
        print(f"scenario error [{cfg.scenario}]: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    paths = emit(result, outdir, cfg.scenario, plots=not args.no_plots)
    for name, path in sorted(paths.items()):
        print(f"wrote {name}: {path}")

    if cfg.scenario == "validate":
        for name, error, tol, passed in result.checks:
            status = "PASS" if passed else "FAIL"
            print(f"{status} {name} (error={error:.3e}, tol={tol:.3e})")
        if not result.all_passed:
            return EXIT_VALIDATION
    print(f"done in {result.wall_time:.2f}s")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
