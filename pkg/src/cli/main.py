"""Command-line entry: ``torus-vacant <simulate|theory|green|tails|compare> ...``.

Data goes to files, logs go to stderr. Exit codes: 0 success, 1 computation failure,
2 bad configuration or arguments, 3 memory budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from src.cli import commands
from src.config.configuration import DEFAULT_CONFIG_FILE, Configuration, set_configuration
from src.config.loader import load_yaml_config
from src.config.logger import get_logger, setup_logging
from src.config.methods import LatticeGreenMethod
from src.exceptions import BudgetExceeded, ConfigError, InvalidPoint, TorusVacantError
from src.utils.log_sanitizer import sanitize_log_input

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _add_runtime_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--conf", default=DEFAULT_CONFIG_FILE, help="runtime defaults (YAML)")
    parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--log-dir", dest="log_dir", help="also write dated log files here")
    parser.add_argument("--max-vertices", dest="max_vertices", type=int, help="largest n^d allowed")
    parser.add_argument("--cache-dir", dest="cache_dir", help="lattice Green cache directory")
    parser.add_argument("--output-dir", dest="output_dir", help="default directory for emitted files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torus-vacant",
        description="Vacant sets of lazy random walks on the discrete torus.",
    )
    _add_runtime_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Monte Carlo replicates -> results.csv, histogram.csv")
    simulate.add_argument("--config", help="experiment file: key=value text, .json or .yaml")
    simulate.add_argument("--n", type=int)
    simulate.add_argument("--d", type=int)
    simulate.add_argument("--ell", type=int)
    simulate.add_argument("--t", type=int)
    simulate.add_argument("--u", type=float)
    simulate.add_argument("--reps", type=int)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--bin-width", dest="bin_width", type=int)
    simulate.add_argument("--workers", type=int)
    simulate.add_argument("--pairs", help="covariance pairs as I:J bitmasks, e.g. 1:2,0:0")
    simulate.add_argument("--output", help="output directory")
    simulate.set_defaults(handler=commands.cmd_simulate, parser=simulate)

    theory = sub.add_parser("theory", help="exact and limiting moments over a sweep of n")
    theory.add_argument("--n", required=True, help="comma-separated side lengths")
    theory.add_argument("--d", type=int, required=True)
    theory.add_argument("--ell", type=int, default=1)
    theory.add_argument("--t", type=int)
    theory.add_argument("--u", type=float)
    theory.add_argument("--pairs", help="covariance pairs as I:J bitmasks")
    theory.add_argument("--workers", type=int)
    theory.add_argument("--output", help="output file")
    theory.set_defaults(handler=commands.cmd_theory, parser=theory)

    green = sub.add_parser("green", help="torus Green tables, identity checks or lattice values")
    green.add_argument("--n", type=int)
    green.add_argument("--d", type=int, required=True)
    green.add_argument("--lattice", action="store_true", help="infinite-lattice G (and G' for d >= 5)")
    green.add_argument("--xi", help="comma-separated lattice point")
    green.add_argument("--method", choices=[m.value for m in LatticeGreenMethod])
    green.add_argument("--check-identities", dest="check_identities", action="store_true")
    green.add_argument("--output", help="output file")
    green.set_defaults(handler=commands.cmd_green, parser=green)

    tails = sub.add_parser("tails", help="exact vs asymptotic hitting-time tails")
    tails.add_argument("--n", type=int, required=True)
    tails.add_argument("--d", type=int, required=True)
    tails.add_argument("--xi", help="comma-separated torus point; the origin by default")
    tails.add_argument("--t", default="0..1024", help="a..b, a..b:step or a comma list")
    tails.add_argument("--output", help="output file")
    tails.set_defaults(handler=commands.cmd_tails, parser=tails)

    compare = sub.add_parser("compare", help="z-scores of a simulate file against a theory file")
    compare.add_argument("--simulate", required=True, help="results.csv from simulate")
    compare.add_argument("--theory", required=True, help="CSV from theory")
    compare.add_argument("--output", help="output file")
    compare.set_defaults(handler=commands.cmd_compare, parser=compare)
    return parser


def load_runtime_configuration(args: argparse.Namespace) -> Configuration:
    """conf.yaml values overridden by the global runtime flags."""
    mapping = dict(load_yaml_config(args.conf))
    for key in ("log_level", "log_dir", "max_vertices", "cache_dir", "output_dir"):
        value = getattr(args, key, None)
        if value is not None:
            mapping[key] = value
    if getattr(args, "workers", None) is not None:
        mapping["workers"] = args.workers
    return Configuration.from_mapping(mapping)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "simulate" and args.config is None and (args.n is None or args.d is None):
        args.parser.error("--n and --d are required when no --config file is given")

    try:
        config = load_runtime_configuration(args)
    except ConfigError as e:
        setup_logging("INFO")
        logger.error(f"configuration error: {sanitize_log_input(str(e))}")
        return EXIT_USAGE
    setup_logging(config.log_level, config.log_dir)
    set_configuration(config)

    try:
        return args.handler(args, config)
    except (ConfigError, InvalidPoint) as e:
        logger.error(f"{args.command}: {sanitize_log_input(str(e))}")
        return EXIT_USAGE
    except BudgetExceeded as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_BUDGET
    except TorusVacantError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE
    except ValueError as e:
        logger.error(f"{args.command}: invalid argument: {sanitize_log_input(str(e))}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
