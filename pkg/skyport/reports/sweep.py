# File: skyport/reports/sweep.py
"""
(α, β) × p scenario sweeps: per-scenario tables, normalized objective and
direct-connection series, and the optional arrival / penetration tables.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import pandas as pd

from skyport.allocation import evaluate_hub_set
from skyport.common.utils import export_excel, write_csv, write_json
from skyport.errors import ScenarioError, SkyportError
from skyport.models import AllocationMode, HubSolution, ProblemInstance, Scenario, TieBreak
from skyport.queueing import QueueSpec, hub_arrival_profiles, lambda_max, lambda_tolerable, market_penetration
from skyport.serialization import dump_solution, solution_from_dict, solution_to_dict
from skyport.solver import SolverOptions, solve

logger = logging.getLogger(__name__)

# ───────── Base case plus the six transfer-time / congestion variants ─────────
DEFAULT_SCENARIOS = (
    (0.0, 1.0),
    (10.0, 1.0), (10.0, 1.1),
    (15.0, 1.0), (15.0, 1.1),
    (20.0, 1.0), (20.0, 1.1),
)
DEFAULT_P_VALUES = tuple(range(11))

SCENARIO_COLUMNS = [
    "p", "objective", "objective_millions", "percent_decrease", "iterations",
    "time_s", "direct_count", "hubs", "solver", "proven_optimal", "error",
]


@dataclass(frozen=True)
class SweepSpec:
    p_values:        tuple[int, ...] = DEFAULT_P_VALUES
    scenarios:       tuple[tuple[float, float], ...] = DEFAULT_SCENARIOS
    allocation_mode: AllocationMode = AllocationMode.PER_PAIR
    tie_break:       TieBreak = TieBreak.DIRECT_THEN_LOWEST_ID
    options:         SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        p_values = tuple(int(p) for p in self.p_values)
        scenarios = tuple((float(a), float(b)) for a, b in self.scenarios)
        if not p_values:
            raise ScenarioError("sweep needs at least one p value")
        if not scenarios:
            raise ScenarioError("sweep needs at least one (alpha, beta) scenario")
        if list(p_values) != sorted(set(p_values)):
            raise ScenarioError(f"p values must be strictly ascending, got {list(p_values)}")
        object.__setattr__(self, "p_values", p_values)
        object.__setattr__(self, "scenarios", scenarios)
        try:
            object.__setattr__(self, "allocation_mode", AllocationMode(self.allocation_mode))
            object.__setattr__(self, "tie_break", TieBreak(self.tie_break))
        except ValueError as e:
            raise ScenarioError(str(e)) from None

    def scenario(self, alpha: float, beta: float, p: int = 0) -> Scenario:
        return Scenario(alpha, beta, p, self.allocation_mode, self.tie_break)

    def labels(self) -> list[str]:
        return [self.scenario(a, b).label for a, b in self.scenarios]


@dataclass
class SweepResult:
    spec:        SweepSpec
    tables:      dict[str, pd.DataFrame]
    normalized:  pd.DataFrame
    direct:      pd.DataFrame
    solutions:   dict[tuple[str, int], HubSolution]
    max_arrival: pd.DataFrame | None = None
    penetration: pd.DataFrame | None = None


# ────────────────────────────────────────────────────────────────────
# Cells
# ────────────────────────────────────────────────────────────────────

def _solve_cell(instance: ProblemInstance, scenario: Scenario, options: SolverOptions) -> dict:
    """Runs in a worker; returns plain dicts so results pickle back cleanly."""
    try:
        solution = solve(instance, scenario, options)
    except SkyportError as e:
        return {"error": f"{type(e).__name__}: {e}"}
    return {"solution": solution_to_dict(solution)}


def _run_cells(instance: ProblemInstance, cells: list[Scenario], options: SolverOptions, jobs: int) -> list[dict]:
    if jobs <= 1 or len(cells) <= 1:
        return [_solve_cell(instance, s, options) for s in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_solve_cell, instance, s, options) for s in cells]
        return [f.result() for f in futures]


def _hubs_text(hubs) -> str:
    return " ".join(str(h) for h in hubs) if hubs else "-"


# ────────────────────────────────────────────────────────────────────
# Sweep
# ────────────────────────────────────────────────────────────────────

def run_sweep(instance: ProblemInstance, spec: SweepSpec | None = None, *, jobs: int = 1,
              trips=None, queue: QueueSpec | None = None, congested_access: bool = True) -> SweepResult:
    """
    Solve every (α, β, p) cell. Cell failures (p above the candidate count,
    unroutable pairs, time limits raising) land in that row's `error` column
    and the sweep carries on.
    """
    spec = spec or SweepSpec()
    cells = [spec.scenario(a, b, p) for a, b in spec.scenarios for p in spec.p_values]
    logger.info(f"run_sweep: {len(cells)} cells on {jobs} worker(s)")
    outcomes = dict(zip(((c.label, c.p) for c in cells), _run_cells(instance, cells, spec.options, jobs)))

    tables, solutions = {}, {}
    normalized = pd.DataFrame({"p": list(spec.p_values)})
    direct = pd.DataFrame({"p": list(spec.p_values)})

    for alpha, beta in spec.scenarios:
        base = spec.scenario(alpha, beta)
        label = base.label

        baseline = None
        zero = outcomes.get((label, 0), {})
        if "solution" in zero:
            baseline = float(zero["solution"]["objective"])
        else:
            try:
                baseline = evaluate_hub_set((), base, instance).objective
            except SkyportError as e:
                logger.warning(f"run_sweep: no p=0 baseline for {label}: {e}")

        rows, norm_col, direct_col = [], [], []
        for p in spec.p_values:
            outcome = outcomes[(label, p)]
            if "error" in outcome:
                logger.warning(f"run_sweep: {label} p={p} failed: {outcome['error']}")
                rows.append({"p": p, "hubs": "-", "error": outcome["error"]})
                norm_col.append(math.nan)
                direct_col.append(math.nan)
                continue

            sol = solution_from_dict(outcome["solution"])
            solutions[(label, p)] = sol
            rows.append({
                "p":                  p,
                "objective":          sol.objective,
                "objective_millions": sol.objective_millions,
                "percent_decrease":   sol.percent_decrease(baseline),
                "iterations":         sol.meta.iterations,
                "time_s":             round(sol.meta.wall_time, 3),
                "direct_count":       sol.direct_count,
                "hubs":               _hubs_text(sol.hubs),
                "solver":             sol.meta.solver,
                "proven_optimal":     sol.meta.proven_optimal,
                "error":              "",
            })
            norm_col.append(sol.objective / baseline if baseline else math.nan)
            direct_col.append(sol.direct_count)

        tables[label] = pd.DataFrame(rows, columns=SCENARIO_COLUMNS)
        normalized[label] = norm_col
        direct[label] = direct_col

    result = SweepResult(spec, tables, normalized, direct, solutions)
    if trips is not None:
        result.max_arrival = arrival_table(instance, spec, solutions, trips, congested_access)
        result.penetration = penetration_table(result.max_arrival, queue or QueueSpec(), spec.labels())
    return result


# ────────────────────────────────────────────────────────────────────
# Arrival & penetration tables
# ────────────────────────────────────────────────────────────────────

def arrival_table(instance: ProblemInstance, spec: SweepSpec, solutions: dict,
                  trips, congested_access: bool = True) -> pd.DataFrame:
    """λ_p^max per (α, β) column for every p ≥ 1, plus maximum / minimum / variation."""
    labels = spec.labels()
    rows = []
    for p in spec.p_values:
        if p == 0:
            continue
        row = {"p": p}
        for (alpha, beta), label in zip(spec.scenarios, labels):
            sol = solutions.get((label, p))
            if sol is None or not sol.hubs:
                row[label] = math.nan
                continue
            scenario = spec.scenario(alpha, beta, p)
            result = hub_arrival_profiles(sol, trips, scenario, instance, congested_access)
            row[label] = lambda_max(result.profiles)
        rows.append(row)
    return summarize_variation(pd.DataFrame(rows, columns=["p"] + labels), labels)


def summarize_variation(table: pd.DataFrame, labels: list[str]) -> pd.DataFrame:
    """Append maximum, minimum and variation (max − min) across the scenario columns."""
    out = table.copy()
    values = out[labels]
    out["maximum"] = values.max(axis=1)
    out["minimum"] = values.min(axis=1)
    out["variation"] = out["maximum"] - out["minimum"]
    return out


def penetration_table(max_arrival: pd.DataFrame, queue: QueueSpec, labels: list[str]) -> pd.DataFrame:
    """Percent of peak demand servable: floor(λ^tol) / λ_p^max per cell."""
    tol = lambda_tolerable(queue)
    out = pd.DataFrame({"p": max_arrival["p"]})
    for label in labels:
        out[label] = [
            market_penetration(tol.floor, lam).percent if pd.notna(lam) else math.nan
            for lam in max_arrival[label]
        ]
    return out


# ────────────────────────────────────────────────────────────────────
# Output
# ────────────────────────────────────────────────────────────────────

def write_sweep(result: SweepResult, out_dir: str, *, no_meta: bool = False, xlsx: bool = False) -> list[str]:
    """Write every table and per-cell solution under out_dir; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    tables = {}
    for label, table in result.tables.items():
        if no_meta:
            table = table.assign(time_s=None)
        tables[label] = table
        written.append(write_csv(os.path.join(out_dir, f"sweep_{label}.csv"), table))

    written.append(write_csv(os.path.join(out_dir, "normalized_objective.csv"), result.normalized))
    written.append(write_csv(os.path.join(out_dir, "direct_connections.csv"), result.direct))

    for (label, p), sol in sorted(result.solutions.items()):
        path = os.path.join(out_dir, "solutions", f"{label}_p{p}.json")
        written.append(write_json(path, dump_solution(sol, include_meta=not no_meta)))

    if result.max_arrival is not None:
        written.append(write_csv(os.path.join(out_dir, "max_arrival.csv"), result.max_arrival))
    if result.penetration is not None:
        written.append(write_csv(os.path.join(out_dir, "market_penetration.csv"), result.penetration))

    if xlsx:
        sheets = dict(tables)
        if result.max_arrival is not None:
            sheets["max_arrival"] = result.max_arrival
        if result.penetration is not None:
            sheets["market_penetration"] = result.penetration
        path = export_excel(sheets, os.path.join(out_dir, "sweep.xlsx"))
        if path:
            written.append(path)

    return written
