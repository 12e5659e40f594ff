# File: skyport/cli.py
"""Batch driver: ingest → solve / sweep → analyze → export."""

from __future__ import annotations

import functools
import json
import logging
import os

import click
from dotenv import dotenv_values
import numpy as np

from config import Config
from skyport import configure_logging
from skyport.allocation import evaluate_hub_set
from skyport.common.utils import atomic_write_text, write_csv, write_json
from skyport.errors import (
    DataError, EnumerationCapError, ExportError, InvalidInstanceError, QueueUnstableError,
    ScenarioError, SkyportError, TripFormatError, UndefinedInputError, UnroutablePairError,
)
from skyport.exporters import solution_geojson
from skyport.ingest import IngestConfig, build_instance, parse_trips, read_zones
from skyport.models import AllocationMode, Scenario, TieBreak, validate
from skyport.queueing import (
    QueueSpec, hub_arrival_profiles, lambda_max, lambda_tolerable, market_penetration,
    profiles_frame, service_rate_from_times,
)
from skyport.reports import SweepSpec, run_sweep, write_sweep
from skyport.serialization import dump_instance, dump_solution, load_instance, load_solution
from skyport.solver import Method, SolverOptions, export_ilp, solve

logger = logging.getLogger(__name__)

EXIT_SOLVER = 1
EXIT_INPUT = 2

INPUT_ERRORS = (
    TripFormatError, InvalidInstanceError, ScenarioError, DataError, ExportError,
    QueueUnstableError, UndefinedInputError, json.JSONDecodeError, UnicodeDecodeError, OSError,
)
SOLVER_ERRORS = (UnroutablePairError, EnumerationCapError)

# ─── Reference queue preset: 12 pads, 2.5 veh/h each, 5 min wait ─────
PRESET_SERVERS = 12
PRESET_SERVICE_RATE = 2.5
PRESET_WAIT_MINUTES = 5.0


def _fail(message: str, code: int):
    click.echo(f"❌ {message}", err=True)
    raise SystemExit(code)


def handle_errors(fn):
    """Map domain errors onto exit codes: 2 for bad input, 1 for solver failures."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SOLVER_ERRORS as e:
            _fail(str(e), EXIT_SOLVER)
        except KeyError as e:
            _fail(e.args[0] if e.args else str(e), EXIT_INPUT)
        except INPUT_ERRORS as e:
            _fail(str(e), EXIT_INPUT)
        except SkyportError as e:
            _fail(str(e), EXIT_SOLVER)

    return wrapper


def _require_file(path: str, what: str):
    if not os.path.isfile(path):
        _fail(f"{what} file not found: {path}", EXIT_INPUT)


def _read_instance(path: str):
    _require_file(path, "instance")
    with open(path, encoding="utf-8") as fh:
        instance = load_instance(fh.read())
    problems = validate(instance)
    # an open hub may still serve these pairs; the solver decides
    unroutable = [m for m in problems if m.startswith("unroutable demand pair")]
    if unroutable:
        logger.warning(f"{path}: {len(unroutable)} demand pairs lack a direct cost")
    fatal = [m for m in problems if m not in unroutable]
    if fatal:
        raise InvalidInstanceError(f"invalid instance {path}: " + "; ".join(fatal[:5]))
    return instance


def _read_solution(path: str):
    _require_file(path, "solution")
    with open(path, encoding="utf-8") as fh:
        return load_solution(fh.read())


def _scenario(alpha, beta, p, mode, tie_break) -> Scenario:
    return Scenario(alpha=alpha, beta=beta, p=p, allocation_mode=mode, tie_break=tie_break)


# ─── Shared option groups ─────────────────────────────────────────────

def scenario_options(fn):
    fn = click.option("--tie-break", type=click.Choice([t.value for t in TieBreak]),
                      default=TieBreak.DIRECT_THEN_LOWEST_ID.value, show_default=True)(fn)
    fn = click.option("--mode", type=click.Choice([m.value for m in AllocationMode]),
                      default=AllocationMode.PER_PAIR.value, show_default=True,
                      help="per-pair or single-origin hub allocation")(fn)
    fn = click.option("--beta", type=float, default=1.0, show_default=True,
                      help="ground congestion factor (>= 1)")(fn)
    fn = click.option("--alpha", type=float, default=0.0, show_default=True,
                      help="transfer time at the hub, minutes")(fn)
    return fn


def solver_options(fn):
    fn = click.option("--gap", type=float, default=0.0, show_default=True,
                      help="relative optimality gap accepted by branch-and-bound")(fn)
    fn = click.option("--restarts", type=int, default=Config.RESTARTS, show_default=True)(fn)
    fn = click.option("--time-limit", type=float, default=Config.TIME_LIMIT, show_default=True,
                      help="seconds")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--method", type=click.Choice([m.value for m in Method]),
                      default=Method.BRANCH_AND_BOUND.value, show_default=True)(fn)
    return fn


def trip_filter_options(fn):
    fn = click.option("--max-trip-minutes", type=float, default=Config.MAX_TRIP_MINUTES, show_default=True)(fn)
    fn = click.option("--min-trip-minutes", type=float, default=Config.MIN_TRIP_MINUTES, show_default=True)(fn)
    return fn


def _read_trips(path: str, min_trip_minutes: float, max_trip_minutes: float):
    _require_file(path, "trips")
    config = IngestConfig(min_trip_minutes=min_trip_minutes, max_trip_minutes=max_trip_minutes,
                          chunk_rows=Config.CHUNK_ROWS)
    trips, _ = parse_trips(path, config)
    return trips


def _solver_options(method, seed, time_limit, restarts, gap) -> SolverOptions:
    return SolverOptions(
        method=method, time_limit=time_limit, gap_tolerance=gap, seed=seed,
        restarts=restarts, enumeration_cap=Config.ENUMERATION_CAP,
    )


# ─── Group ────────────────────────────────────────────────────────────

def _default_map(group: click.Group, path: str) -> dict:
    """key=value run file → click default_map; keys apply to every command that has them."""
    values = {k.strip().replace("-", "_"): v for k, v in dotenv_values(path).items() if v is not None}
    default_map = {}
    for name, command in group.commands.items():
        params = {p.name for p in command.params}
        picked = {k: v for k, v in values.items() if k in params}
        if picked:
            default_map[name] = picked
    unused = set(values) - {k for m in default_map.values() for k in m}
    if unused:
        logger.warning(f"config file {path}: ignoring unknown keys {sorted(unused)}")
    return default_map


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="key=value file with option defaults; flags override")
@click.option("--log-level", default=Config.LOG_LEVEL, show_default=True)
@click.pass_context
def cli(ctx, config_path, log_level):
    """Air-taxi skyport location suite."""
    configure_logging(log_level)
    if config_path:
        _require_file(config_path, "config")
        ctx.default_map = _default_map(ctx.command, config_path)


# ─── ingest ───────────────────────────────────────────────────────────

@cli.command()
@click.argument("trips_path", metavar="TRIPS")
@click.argument("zones_path", metavar="ZONES")
@click.option("--out-dir", default=Config.OUTPUT_DIR, show_default=True)
@click.option("--keep-zones", type=int, default=None, help="keep the N origins with most airport demand")
@click.option("--prune-quantile", type=float, default=None)
@click.option("--airspeed", type=float, default=Config.AIRSPEED_MPH, show_default=True, help="mph")
@trip_filter_options
@click.option("--chunk-rows", type=int, default=Config.CHUNK_ROWS, show_default=True)
@handle_errors
def ingest(trips_path, zones_path, out_dir, keep_zones, prune_quantile, airspeed,
           min_trip_minutes, max_trip_minutes, chunk_rows):
    """Build a ProblemInstance JSON from a trips CSV and a zones CSV."""
    _require_file(trips_path, "trips")
    _require_file(zones_path, "zones")
    config = IngestConfig(
        airspeed=airspeed,
        load_unload=Config.LOAD_UNLOAD_MINUTES,
        min_trip_minutes=min_trip_minutes,
        max_trip_minutes=max_trip_minutes,
        prune_keep=keep_zones,
        prune_quantile=prune_quantile,
        chunk_rows=chunk_rows,
    )
    click.echo(f"▶ Reading {trips_path}")
    zones = read_zones(zones_path)
    trips, stats = parse_trips(trips_path, config)
    instance, stats = build_instance(trips, zones, config, stats)

    instance_path = atomic_write_text(os.path.join(out_dir, "instance.json"), dump_instance(instance))
    stats_path = write_json(os.path.join(out_dir, "ingest_stats.json"), stats.to_dict())
    click.echo(
        f"✅ {instance.n_origins} origins, {instance.n_airports} airports, "
        f"{stats.retained}/{stats.rows_read} trips retained → {instance_path}, {stats_path}"
    )


# ─── solve ────────────────────────────────────────────────────────────

def format_row(solution, baseline, show_time: bool = True) -> str:
    """One results line: p, objective (M), % decrease, iterations, time, direct, hubs."""
    decrease = solution.percent_decrease(baseline) if baseline is not None else None
    decrease = "-" if decrease is None else f"{decrease:.2f}"
    elapsed = f"{solution.meta.wall_time:.2f}" if show_time else "-"
    hubs = " ".join(str(h) for h in solution.hubs) or "-"
    return (
        f"{solution.p:>3}  {solution.objective_millions:>10.2f}  {decrease:>8}  "
        f"{solution.meta.iterations:>10}  {elapsed:>8}  {solution.direct_count:>6}  {hubs}"
    )


ROW_HEADER = f"{'p':>3}  {'obj (M)':>10}  {'% dec':>8}  {'iterations':>10}  {'time s':>8}  {'direct':>6}  hubs"


@cli.command("solve")
@click.argument("instance_path", metavar="INSTANCE")
@scenario_options
@click.option("--p", "p", type=int, required=True, help="number of hubs")
@solver_options
@click.option("--out", "out_path", default=None, help="solution JSON path")
@click.option("--no-meta", is_flag=True, help="omit wall-clock time from the output")
@handle_errors
def solve_cmd(instance_path, alpha, beta, tie_break, mode, p, method, seed, time_limit,
              restarts, gap, out_path, no_meta):
    """Solve one scenario; prints a table row and writes the solution JSON."""
    instance = _read_instance(instance_path)
    scenario = _scenario(alpha, beta, p, mode, tie_break)
    options = _solver_options(method, seed, time_limit, restarts, gap)

    solution = solve(instance, scenario, options)
    try:
        baseline = evaluate_hub_set((), scenario.with_p(0), instance).objective
    except UnroutablePairError:
        baseline = None

    out_path = out_path or os.path.join(Config.OUTPUT_DIR, f"solution_{scenario.label}_p{p}.json")
    atomic_write_text(out_path, dump_solution(solution, include_meta=not no_meta))
    click.echo(ROW_HEADER)
    click.echo(format_row(solution, baseline, show_time=not no_meta))
    if not solution.meta.proven_optimal and not solution.meta.heuristic:
        click.echo(f"⚠️  stopped before proving optimality (gap {solution.meta.gap})")
    click.echo(f"✅ solution → {out_path}")


# ─── sweep ────────────────────────────────────────────────────────────

def _parse_pairs(values) -> tuple[tuple[float, float], ...] | None:
    pairs = []
    for value in values:
        try:
            a, b = value.split(",")
            pairs.append((float(a), float(b)))
        except ValueError:
            raise click.BadParameter(f"expected ALPHA,BETA, got {value!r}", param_hint="--scenario")
    return tuple(pairs) or None


@cli.command()
@click.argument("instance_path", metavar="INSTANCE")
@click.option("--scenario", "scenario_pairs", multiple=True, help="ALPHA,BETA (repeatable); default the seven base pairs")
@click.option("--p-values", default="0-10", show_default=True, help="e.g. 0-10 or 0,1,2")
@click.option("--mode", type=click.Choice([m.value for m in AllocationMode]),
              default=AllocationMode.PER_PAIR.value, show_default=True)
@click.option("--tie-break", type=click.Choice([t.value for t in TieBreak]),
              default=TieBreak.DIRECT_THEN_LOWEST_ID.value, show_default=True)
@solver_options
@click.option("--jobs", type=int, default=1, show_default=True, help="worker processes")
@click.option("--trips", "trips_path", default=None, help="trips CSV for arrival and penetration tables")
@trip_filter_options
@click.option("--servers", type=int, default=Config.SERVERS, show_default=True)
@click.option("--service-rate", type=float, default=PRESET_SERVICE_RATE, show_default=True)
@click.option("--wait-minutes", type=float, default=Config.WAIT_MINUTES, show_default=True)
@click.option("--out-dir", default=Config.OUTPUT_DIR, show_default=True)
@click.option("--xlsx", is_flag=True, help="also write sweep.xlsx, one sheet per scenario")
@click.option("--no-meta", is_flag=True)
@handle_errors
def sweep(instance_path, scenario_pairs, p_values, mode, tie_break, method, seed, time_limit, restarts,
          gap, jobs, trips_path, min_trip_minutes, max_trip_minutes, servers, service_rate,
          wait_minutes, out_dir, xlsx, no_meta):
    """Solve every (α, β) × p cell and write the comparison tables."""
    instance = _read_instance(instance_path)
    spec_kwargs = {
        "p_values": parse_p_values(p_values),
        "allocation_mode": mode,
        "tie_break": tie_break,
        "options": _solver_options(method, seed, time_limit, restarts, gap),
    }
    pairs = _parse_pairs(scenario_pairs)
    if pairs:
        spec_kwargs["scenarios"] = pairs
    spec = SweepSpec(**spec_kwargs)

    trips = None
    if trips_path:
        trips = _read_trips(trips_path, min_trip_minutes, max_trip_minutes)
    queue = QueueSpec(servers=servers, service_rate=service_rate, wait_target=wait_minutes / 60.0)

    click.echo(f"▶ {len(spec.scenarios)} scenarios × {len(spec.p_values)} p values")
    result = run_sweep(instance, spec, jobs=jobs, trips=trips, queue=queue)
    written = write_sweep(result, out_dir, no_meta=no_meta, xlsx=xlsx)

    failed = sum((t["error"].fillna("") != "").sum() for t in result.tables.values())
    if failed:
        click.echo(f"⚠️  {failed} cells failed; see the error column")
    click.echo(f"✅ {len(written)} files → {out_dir}")


def parse_p_values(text: str) -> tuple[int, ...]:
    text = text.strip()
    try:
        if "-" in text and "," not in text:
            lo, hi = (int(v) for v in text.split("-"))
            return tuple(range(lo, hi + 1))
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise click.BadParameter(f"cannot parse p values {text!r}", param_hint="--p-values")


# ─── analyze ──────────────────────────────────────────────────────────

@cli.command()
@click.argument("instance_path", metavar="INSTANCE")
@click.argument("solution_path", metavar="SOLUTION")
@click.argument("trips_path", metavar="TRIPS")
@click.option("--alpha", type=float, default=None, help="default: the solution's α, else 0")
@click.option("--beta", type=float, default=None, help="default: the solution's β, else 1")
@click.option("--raw-access", is_flag=True, help="hub arrival uses c_ik instead of β·c_ik")
@trip_filter_options
@click.option("--servers", type=int, default=Config.SERVERS, show_default=True)
@click.option("--service-rate", type=float, default=None,
              help="μ veh/hour; default from the longest hub → airport flight")
@click.option("--wait-minutes", type=float, default=Config.WAIT_MINUTES, show_default=True)
@click.option("--reference-preset", is_flag=True, help=f"c={PRESET_SERVERS}, μ={PRESET_SERVICE_RATE}, wait {PRESET_WAIT_MINUTES:g} min")
@click.option("--out-dir", default=Config.OUTPUT_DIR, show_default=True)
@handle_errors
def analyze(instance_path, solution_path, trips_path, alpha, beta, raw_access, min_trip_minutes,
            max_trip_minutes, servers, service_rate, wait_minutes, reference_preset, out_dir):
    """Hub arrival profiles, λ_p^max, λ^tol and market penetration for a solution."""
    instance = _read_instance(instance_path)
    solution = _read_solution(solution_path)
    trips = _read_trips(trips_path, min_trip_minutes, max_trip_minutes)
    for hub in solution.hubs:
        instance.origin_index(hub)

    if alpha is None:
        alpha = solution.meta.alpha if solution.meta.alpha is not None else 0.0
    if beta is None:
        beta = solution.meta.beta if solution.meta.beta is not None else 1.0
    scenario = Scenario(alpha=alpha, beta=beta, p=solution.p)
    result = hub_arrival_profiles(solution, trips, scenario, instance, congested_access=not raw_access)
    peak = lambda_max(result.profiles)

    if reference_preset:
        servers, service_rate, wait_minutes = PRESET_SERVERS, PRESET_SERVICE_RATE, PRESET_WAIT_MINUTES
    elif service_rate is None:
        idx = [instance.origin_index(h) for h in solution.hubs]
        longest = float(np.nanmax(instance.aerial_cost[idx]))
        service_rate = service_rate_from_times(longest, Config.LOAD_UNLOAD_MINUTES)

    queue = QueueSpec(servers=servers, service_rate=service_rate, wait_target=wait_minutes / 60.0)
    tol = lambda_tolerable(queue)
    report = market_penetration(tol.floor, peak)

    profiles_path = write_csv(os.path.join(out_dir, "profiles.csv"), profiles_frame(result.profiles))
    doc = {
        "hubs":             list(solution.hubs),
        "beta":             scenario.beta,
        "days":             result.days,
        "routed_trips":     result.routed,
        "skipped_trips":    result.skipped,
        "servers":          queue.servers,
        "service_rate":     queue.service_rate,
        "wait_minutes":     wait_minutes,
        "lambda_max":       peak,
        "lambda_tol":       tol.value,
        "lambda_tol_floor": tol.floor,
        "lambda_tol_open":  tol.open_bound,
        "penetration":      report.penetration,
        "percent":          report.percent,
        "full_coverage":    report.full_coverage,
    }
    report_path = write_json(os.path.join(out_dir, "penetration.json"), doc)

    pct = "-" if report.percent is None else f"{report.percent:.2f}%"
    click.echo(f"λ_p^max = {peak:g} veh/h   λ^tol = {tol.floor} veh/h   penetration = {pct}")
    click.echo(f"✅ {profiles_path}, {report_path}")


# ─── export ───────────────────────────────────────────────────────────

@cli.command()
@click.argument("instance_path", metavar="INSTANCE")
@click.option("--format", "fmt", type=click.Choice(["mps", "geojson"]), required=True,
              help="mps is written in free (whitespace-separated) format")
@scenario_options
@click.option("--p", "p", type=int, default=0, show_default=True)
@click.option("--solution", "solution_path", default=None, help="required for geojson")
@click.option("--out", "out_path", default=None)
@handle_errors
def export(instance_path, fmt, alpha, beta, tie_break, mode, p, solution_path, out_path):
    """
    Write the ILP as MPS, or a solution as a GeoJSON map.

    MPS is free format: fields are whitespace-separated, since names like
    x_i_j_k outgrow the fixed-format columns.
    """
    instance = _read_instance(instance_path)
    if fmt == "mps":
        scenario = _scenario(alpha, beta, p, mode, tie_break)
        text = export_ilp(instance, scenario)
        out_path = out_path or os.path.join(Config.OUTPUT_DIR, f"skyport_{scenario.label}_p{p}.mps")
        atomic_write_text(out_path, text)
        click.echo(f"✅ {instance.binary_variable_count} binaries → {out_path}")
        return

    if not solution_path:
        raise click.UsageError("--format geojson needs --solution")
    solution = _read_solution(solution_path)
    collection = solution_geojson(instance, solution)
    out_path = out_path or os.path.join(Config.OUTPUT_DIR, "solution.geojson")
    write_json(out_path, collection)
    routes = len(collection["features"]) - instance.n_origins - instance.n_airports
    click.echo(f"✅ {routes} routes → {out_path}")


def main():
    cli(prog_name="skyport")


if __name__ == "__main__":
    main()
