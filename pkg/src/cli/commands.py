"""Subcommand implementations. Each returns a process exit code."""

from __future__ import annotations

import argparse
import math
from pathlib import Path
from typing import Any, Optional

from src.cli.output import RunManifest, read_csv, write_csv
from src.config.configuration import Configuration
from src.config.logger import get_logger
from src.exceptions import ConfigError, NonConvergence
from src.lattice.green import lattice_green, lattice_green_deriv
from src.lattice.sums import alpha_provenance
from src.montecarlo.config import ExperimentConfig
from src.montecarlo.runner import HISTOGRAM_MIN_REPS, run_experiment
from src.series.tails import asymptotic_tail, tail_distribution
from src.spectral.green import (
    build_green_tables,
    cached_green_tables,
    check_identities,
    green_table_columns,
    green_table_rows,
)
from src.theory.limits import nu_d, origin_green, time_from_density, variance_scale
from src.theory.moments import exact_covariance, exact_mean_vacant, exact_variance, mean_expansion
from src.theory.params import CovarianceQuery
from src.torus.geometry import TorusGeometry

logger = get_logger(__name__)

THEORY_COLUMNS = [
    "n", "d", "ell", "t", "u", "mean_exact", "mean_expansion", "var_exact", "var_over_scale", "nu_limit",
]
TAIL_COLUMNS = ["t", "exact", "asymptotic", "bound"]
RESULT_COLUMNS = ["statistic", "first", "second", "value", "stderr"]
COMPARE_COLUMNS = ["statistic", "first", "second", "mc", "stderr", "exact", "z"]


# -- flag parsing ------------------------------------------------------------------


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"expected a comma-separated list of integers, got {text!r}") from e


def parse_times(text: str) -> list[int]:
    """``a..b`` (inclusive), ``a..b:step`` or a comma list."""
    text = str(text).strip()
    if ".." not in text:
        return parse_int_list(text)
    span, _, step = text.partition(":")
    first, _, last = span.partition("..")
    try:
        values = list(range(int(first), int(last) + 1, int(step) if step else 1))
    except ValueError as e:
        raise ConfigError(f"bad time range {text!r}") from e
    if not values or values[0] < 0:
        raise ConfigError(f"time range {text!r} must be non-empty and start at t >= 0")
    return values


def parse_pairs(text: Optional[str]) -> Optional[list[tuple[int, int]]]:
    """``"1:2,0:0"`` -> [(1, 2), (0, 0)] of subset bitmasks."""
    if not text:
        return None
    pairs = []
    for item in str(text).split(","):
        first, sep, second = item.partition(":")
        if not sep:
            raise ConfigError(f"pairs are written I:J with subset bitmasks, got {item!r}")
        pairs.append((int(first), int(second)))
    return pairs


def _output_path(args: argparse.Namespace, config: Configuration, default_name: str) -> Path:
    if getattr(args, "output", None):
        return Path(args.output)
    return Path(config.output_dir) / default_name


# -- simulate ------------------------------------------------------------------------


def _result_rows(stats) -> list[list[Any]]:
    rows: list[list[Any]] = [
        ["mean", 0, 0, stats.mean, stats.mean_stderr],
        ["variance", 0, 0, stats.variance, stats.variance_stderr],
        ["skewness", 0, 0, stats.skewness, None],
        ["excess_kurtosis", 0, 0, stats.excess_kurtosis, None],
    ]
    for mask in stats.columns:
        rows.append(["range_mean", mask, mask, stats.range_mean(mask), None])
    for first, second in stats.cross:
        entry = stats.covariance_entry(first, second)
        rows.append(["covariance", first, second, entry.value, entry.stderr])
    return rows


def cmd_simulate(args: argparse.Namespace, config: Configuration) -> int:
    overrides = {
        "n": args.n,
        "d": args.d,
        "ell": args.ell,
        "t": args.t,
        "u": args.u,
        "reps": args.reps,
        "seed": args.seed,
        "bin_width": args.bin_width,
        "workers": args.workers,
        "pairs": parse_pairs(args.pairs),
    }
    cfg = ExperimentConfig.from_sources(args.config, overrides)
    stats = run_experiment(cfg, config=config)

    out_dir = Path(args.output) if args.output else Path(config.output_dir)
    manifest = RunManifest(
        subcommand="simulate",
        config=cfg.provenance(),
        output_dir=out_dir,
        seed=cfg.seed,
        extra={"rounding": "t = round(u n^d) - 1, ties to even"},
    )
    write_csv(out_dir / "results.csv", RESULT_COLUMNS, _result_rows(stats), manifest)
    if cfg.reps >= HISTOGRAM_MIN_REPS:
        write_csv(out_dir / "histogram.csv", ["bin_left", "bin_right", "count"], stats.histogram.rows(), manifest)
    else:
        logger.warning(f"skipping histogram.csv: {cfg.reps} replicates < {HISTOGRAM_MIN_REPS}")
    return 0


# -- theory --------------------------------------------------------------------------


def _nu_or_missing(x: float, d: int, config: Configuration) -> Optional[float]:
    try:
        return nu_d(x, d, config)
    except NonConvergence as e:
        logger.warning(f"nu_{d}({x!r}) not available: {e}")
        return None


def cmd_theory(args: argparse.Namespace, config: Configuration) -> int:
    d = args.d
    if d < 3:
        raise ConfigError(f"theory formulas need d >= 3, got d={d}")
    if (args.t is None) == (args.u is None):
        raise ConfigError("give exactly one of --t and --u")
    pairs = parse_pairs(args.pairs) or []
    queries = [CovarianceQuery(ell=args.ell, first=i, second=j) for i, j in pairs]
    g0 = origin_green(d, config)

    rows = []
    for n in parse_int_list(args.n):
        geom = TorusGeometry(d, n)
        geom.check_budget(config.max_vertices)
        t = args.t if args.t is not None else time_from_density(args.u, n, d)
        u = args.u if args.u is not None else (t + 1) / geom.volume
        variance = exact_variance(geom, args.ell, t, config)
        row = [
            n, d, args.ell, t, (t + 1) / geom.volume,
            exact_mean_vacant(geom, args.ell, t),
            mean_expansion(geom, args.ell, t),
            variance,
            variance / variance_scale(n, d),
            _nu_or_missing(2.0 * args.ell * u / g0, d, config),
        ]
        row.extend(exact_covariance(geom, args.ell, t, q, config) for q in queries)
        rows.append(row)
        logger.info(f"theory n={n} d={d} ell={args.ell} t={t}: var={variance!r}")

    extra: dict[str, Any] = {"green_origin": g0}
    if d in (3, 4):
        extra[f"alpha_{d}"] = alpha_provenance(d, config)
    manifest = RunManifest(subcommand="theory", config=vars_of(args), output_dir=Path(config.output_dir), extra=extra)
    columns = THEORY_COLUMNS + [f"cov_{q.first}_{q.second}" for q in queries]
    write_csv(_output_path(args, config, "theory.csv"), columns, rows, manifest)
    return 0


# -- green ---------------------------------------------------------------------------


def cmd_green(args: argparse.Namespace, config: Configuration) -> int:
    manifest = RunManifest(subcommand="green", config=vars_of(args), output_dir=Path(config.output_dir))
    if args.lattice:
        xi = parse_int_list(args.xi) if args.xi else [0] * args.d
        if len(xi) != args.d:
            raise ConfigError(f"--xi needs {args.d} coordinates, got {len(xi)}")
        green = lattice_green(xi, args.d, method=args.method, config=config)
        deriv = lattice_green_deriv(xi, args.d, method=args.method, config=config) if args.d >= 5 else None
        row = [
            args.d, " ".join(str(c) for c in xi), green.value, green.bound,
            deriv.value if deriv else None, deriv.bound if deriv else None, green.method,
        ]
        columns = ["d", "xi", "G", "G_bound", "Gprime", "Gprime_bound", "method"]
        write_csv(_output_path(args, config, "lattice_green.csv"), columns, [row], manifest)
        return 0

    if args.n is None:
        raise ConfigError("--n is required for torus Green tables")
    geom = TorusGeometry(args.d, int(args.n))
    tables = build_green_tables(geom, config=config)
    if args.check_identities:
        report = check_identities(tables)
        rows = [
            ["zero_sum", report.zero_sum, report.zero_sum_tolerance],
            ["zero_sum_prime", report.zero_sum_prime, report.zero_sum_tolerance],
            ["plancherel", report.plancherel, report.plancherel_tolerance],
            ["symmetry", report.symmetry, report.symmetry_tolerance],
        ]
        rows = [[name, value, tol, abs(value) <= tol] for name, value, tol in rows]
        write_csv(_output_path(args, config, "identities.csv"), ["check", "residual", "tolerance", "passed"], rows, manifest)
        logger.info(f"identity checks {'passed' if report.passed else 'FAILED'} for n={geom.n} d={geom.d}")
        return 0 if report.passed else 1

    write_csv(_output_path(args, config, "green.csv"), green_table_columns(geom.d), green_table_rows(tables), manifest)
    return 0


# -- tails ---------------------------------------------------------------------------


def cmd_tails(args: argparse.Namespace, config: Configuration) -> int:
    geom = TorusGeometry(args.d, args.n)
    geom.check_budget(config.max_vertices)
    xi = geom.point(parse_int_list(args.xi) if args.xi else [0] * args.d, strict=True)
    times = parse_times(args.t)
    distribution = tail_distribution(geom, xi)
    tables = cached_green_tables(geom)

    rows = []
    for t in times:
        coefficient = distribution.coefficient(t)
        rows.append([t, distribution.tail(t), asymptotic_tail(geom, xi, t, tables, config), coefficient.bound])
    manifest = RunManifest(
        subcommand="tails",
        config=vars_of(args),
        output_dir=Path(config.output_dir),
        extra={"mean_hitting_time": distribution.mean_hitting_time(), "roots": distribution.roots.k},
    )
    write_csv(_output_path(args, config, "tails.csv"), TAIL_COLUMNS, rows, manifest)
    return 0


# -- compare -------------------------------------------------------------------------


def _key(record: dict[str, Any]) -> tuple[int, int, int, int]:
    return int(record["n"]), int(record["d"]), int(record["ell"]), int(record["t"])


def _float(text: Optional[str]) -> Optional[float]:
    return None if text in (None, "", "NA") else float(text)


def cmd_compare(args: argparse.Namespace, config: Configuration) -> int:
    sim_meta, sim_rows = read_csv(args.simulate)
    _, theory_rows = read_csv(args.theory)
    if "config" not in sim_meta:
        raise ConfigError(f"{args.simulate} has no config header")
    key = _key(sim_meta["config"])
    matches = [row for row in theory_rows if _key(row) == key]
    if not matches:
        raise ConfigError(f"no theory row matches (n, d, ell, t) = {key}")
    theory = matches[0]

    rows = []
    for record in sim_rows:
        statistic, first, second = record["statistic"], record["first"], record["second"]
        if statistic == "mean":
            exact = _float(theory.get("mean_exact"))
        elif statistic == "variance":
            exact = _float(theory.get("var_exact"))
        elif statistic == "covariance":
            exact = _float(theory.get(f"cov_{first}_{second}", theory.get(f"cov_{second}_{first}")))
        else:
            continue
        if exact is None:
            continue
        mc, stderr = float(record["value"]), _float(record["stderr"])
        z = (mc - exact) / stderr if stderr else None
        rows.append([statistic, int(first), int(second), mc, stderr, exact, z])

    manifest = RunManifest(
        subcommand="compare",
        config=vars_of(args),
        output_dir=Path(config.output_dir),
        seed=sim_meta.get("seed"),
    )
    write_csv(_output_path(args, config, "compare.csv"), COMPARE_COLUMNS, rows, manifest)
    worst = max((abs(r[-1]) for r in rows if r[-1] is not None and math.isfinite(r[-1])), default=0.0)
    logger.info(f"compared {len(rows)} statistics; largest |z| = {worst:.3f}")
    return 0


def vars_of(args: argparse.Namespace) -> dict[str, Any]:
    """Flag values worth recording in the provenance header."""
    return {k: v for k, v in vars(args).items() if k not in {"handler", "parser"} and v is not None}
