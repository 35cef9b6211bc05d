from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from src.common.errors import ConfigError, SolverError
from src.common.logging_utils import configure_logging, get_logger
from src.common.settings import explain_loaded_keys
from src.scenarios.config import RunConfig
from src.scenarios.pipeline import ScenarioPipeline

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3

logger = get_logger(__name__)


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Conditional master-equation scenarios for a QPC-measured charge qubit")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run the scenario described by a config file")
    run.add_argument("config", help="Path to a key-value (or JSON) run config")
    run.add_argument("--out", default="data/results", help="Directory for result CSV files")
    run.add_argument("--threads", type=int, default=1, help="Worker processes for sweep points")

    validate = commands.add_parser("validate", help="Check a config file without running it")
    validate.add_argument("config", help="Path to a key-value (or JSON) run config")
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    configure_logging()
    try:
        config = RunConfig.load(Path(args.config))
        config.model().liouvillian
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    logger.info(f"Loaded config keys: {explain_loaded_keys(config.header_items())}")
    if args.command == "validate":
        print(f"Config OK: scenario={config.scenario}")
        return EXIT_OK

    try:
        ScenarioPipeline(config=config, out_dir=Path(args.out), threads=args.threads).run()
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK
