"""Command-line entry points: run, validate, list-scenarios.

Exit codes: 0 success, 1 configuration error, 2 runtime error.  The output
directory from the config can be overridden with the DROPLETWAVE_OUTDIR
environment variable or --outdir.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .scenarios import BUILTIN_SCENARIOS, ConfigError, run_scenario, validate_config

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _load_config(ref: str) -> dict:
    if ref in BUILTIN_SCENARIOS:
        return json.loads(json.dumps(BUILTIN_SCENARIOS[ref]))
    if not os.path.exists(ref):
        raise ConfigError(f"no such config file or built-in scenario: {ref!r}")
    with open(ref) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {ref!r} is not valid JSON: {exc}") from exc


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="dropletwave",
        description="Scenario runner for droplet-based wave-source reconstruction",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute a scenario config (path or built-in name)")
    p_run.add_argument("config")
    p_run.add_argument("--outdir", default=None, help="override the output directory")
    p_val = sub.add_parser("validate", help="check a scenario config")
    p_val.add_argument("config")
    sub.add_parser("list-scenarios", help="list built-in scenario configs")

    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if args.command == "list-scenarios":
        for name, cfg in BUILTIN_SCENARIOS.items():
            print(f"{name}: {cfg.get('description', '')}")
        return EXIT_OK

    try:
        cfg = _load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        try:
            warnings = validate_config(cfg)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        print("config OK")
        return EXIT_OK

    outdir = args.outdir or os.environ.get("DROPLETWAVE_OUTDIR")
    try:
        report = run_scenario(cfg, outdir_override=outdir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - surfaced with context, exit code 2
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for path in report.outputs:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
