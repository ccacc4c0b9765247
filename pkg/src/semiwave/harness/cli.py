"""Command-line front end: run, validate, list-scenarios."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import (
    SCENARIO_NAMES,
    ConfigError,
    ExperimentConfig,
    default_config_path,
    validate_config,
)
from .emit import emit, format_float
from .scenarios import SCENARIOS, run_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semiwave",
        description="Build semiclassical solitary-wave fields and check them "
                    "against a spectral propagator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario and write its report")
    run_p.add_argument("config",
                       help="scenario name (packaged configuration) or a path "
                            "to a YAML configuration file")
    run_p.add_argument("--out", default=None, metavar="DIR",
                       help="output directory (default: output.directory from "
                            "the configuration)")
    run_p.add_argument("--override", action="append", default=[],
                       metavar="PATH=VALUE",
                       help="dotted-path configuration override, repeatable "
                            "(e.g. solver.dt=5.0e-4)")
    run_p.add_argument("--snapshots", action="store_true",
                       help="also write stored field snapshots as CSV")

    val_p = sub.add_parser("validate", help="check a configuration and exit")
    val_p.add_argument("config", help="scenario name or YAML path")
    val_p.add_argument("--override", action="append", default=[],
                       metavar="PATH=VALUE")

    sub.add_parser("list-scenarios", help="list scenario names")
    return parser


def _load_config(source: str, overrides: list[str]) -> ExperimentConfig:
    path = Path(source)
    if path.exists():
        cfg = ExperimentConfig.from_file(path)
    elif source in SCENARIO_NAMES:
        cfg = ExperimentConfig.from_file(default_config_path(source))
    else:
        raise ConfigError(
            [f"config: {source!r} is neither an existing file nor a scenario "
             f"name (choose from {', '.join(SCENARIO_NAMES)})"]
        )
    for item in overrides:
        cfg.apply_override(item)
    return cfg


def _print_rows(result) -> None:
    for r in result.rows:
        flag = "PASS" if r.passed else "FAIL"
        if r.tolerance is None:
            print(f"[{flag}] {r.metric} = {format_float(r.value)} (reported)")
        else:
            print(f"[{flag}] {r.metric} = {format_float(r.value)} "
                  f"(tolerance {format_float(r.tolerance)})")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list-scenarios":
        for name in SCENARIO_NAMES:
            _, desc = SCENARIOS[name]
            print(f"{name}: {desc}")
        return 0

    try:
        cfg = _load_config(args.config, args.override)
        validate_config(cfg)
    except ConfigError as err:
        print("configuration error:", file=sys.stderr)
        for line in str(err).split("; "):
            print(f"  {line}", file=sys.stderr)
        return 2

    if args.command == "validate":
        print(f"configuration ok: scenario {cfg.scenario}")
        return 0

    result = run_scenario(cfg)
    out_dir = args.out or cfg.output.get("directory") \
        or f"out/{cfg.scenario.replace('-', '_')}"
    formats = ("results", "plotdata", "snapshots") if args.snapshots \
        else ("results", "plotdata")
    written = emit(result, out_dir, formats=formats)

    _print_rows(result)
    failed = sum(1 for r in result.rows if not r.passed)
    print(f"{len(result.rows)} rows, "
          + ("all passed" if failed == 0 else f"{failed} failed")
          + f"; wrote {len(written)} files under {out_dir}")
    return 0 if failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
