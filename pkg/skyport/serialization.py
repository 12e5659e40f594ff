# File: skyport/serialization.py
"""
Canonical JSON for ProblemInstance, Scenario and HubSolution.
Absent matrix entries travel as null.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from skyport.errors import InvalidInstanceError
from skyport.models import (
    HubSolution, ProblemInstance, Route, Scenario, SolverMeta, Zone,
)


def _matrix_out(arr: np.ndarray) -> list[list[Any]]:
    out = []
    for row in np.asarray(arr).tolist():
        out.append([None if isinstance(v, float) and math.isnan(v) else v for v in row])
    return out


def _matrix_in(rows) -> np.ndarray:
    return np.array([[np.nan if v is None else v for v in row] for row in rows], dtype=float)


def _zone_out(z: Zone) -> dict:
    return {"id": z.id, "name": z.name, "lat": z.lat, "lon": z.lon, "is_airport": z.is_airport}


# ─── ProblemInstance ─────────────────────────────────────────────────

def instance_to_dict(instance: ProblemInstance) -> dict:
    return {
        "origins":     [_zone_out(z) for z in instance.origins],
        "airports":    [_zone_out(z) for z in instance.airports],
        "ground_cost": _matrix_out(instance.ground_cost),
        "aerial_cost": _matrix_out(instance.aerial_cost),
        "demand":      np.asarray(instance.demand).tolist(),
    }


def instance_from_dict(doc: dict) -> ProblemInstance:
    try:
        n = len(doc["origins"])
        m = len(doc["airports"])
        return ProblemInstance(
            origins=tuple(Zone(**z) for z in doc["origins"]),
            airports=tuple(Zone(**z) for z in doc["airports"]),
            ground_cost=_matrix_in(doc["ground_cost"]).reshape(n, n + m),
            aerial_cost=_matrix_in(doc["aerial_cost"]).reshape(n, m),
            demand=np.array(doc["demand"]).reshape(n, m),
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InvalidInstanceError):
            raise
        raise InvalidInstanceError(f"malformed instance document: {e}") from None


# ─── Scenario ────────────────────────────────────────────────────────

def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "alpha":           scenario.alpha,
        "beta":            scenario.beta,
        "p":               scenario.p,
        "allocation_mode": scenario.allocation_mode.value,
        "tie_break":       scenario.tie_break.value,
    }


def scenario_from_dict(doc: dict) -> Scenario:
    return Scenario(**doc)


# ─── HubSolution ─────────────────────────────────────────────────────

def solution_to_dict(solution: HubSolution, *, include_meta: bool = True) -> dict:
    routing = [
        {
            "origin":  i,
            "airport": j,
            "kind":    route.kind.value,
            "hub":     route.hub,
            "cost":    route.cost,
        }
        for (i, j), route in sorted(solution.routing.items())
    ]
    doc = {
        "hubs":               list(solution.hubs),
        "objective":          solution.objective,
        "objective_millions": solution.objective_millions,
        "direct_count":       solution.direct_count,
        "routing":            routing,
    }
    meta = solution.meta
    doc["meta"] = {
        "solver":         meta.solver,
        "iterations":     meta.iterations,
        "proven_optimal": meta.proven_optimal,
        "gap":            meta.gap,
        "heuristic":      meta.heuristic,
        "alpha":          meta.alpha,
        "beta":           meta.beta,
        "mode":           meta.mode,
    }
    if include_meta:
        doc["meta"]["wall_time"] = meta.wall_time
    return doc


def solution_from_dict(doc: dict) -> HubSolution:
    routing = {
        (int(r["origin"]), int(r["airport"])): Route(kind=r["kind"], cost=r["cost"], hub=r.get("hub"))
        for r in doc["routing"]
    }
    meta = doc.get("meta") or {}
    return HubSolution(
        hubs=tuple(doc["hubs"]),
        routing=routing,
        objective=float(doc["objective"]),
        direct_count=int(doc["direct_count"]),
        meta=SolverMeta(
            solver=meta.get("solver", "evaluate"),
            iterations=int(meta.get("iterations", 0)),
            wall_time=float(meta.get("wall_time", 0.0)),
            proven_optimal=bool(meta.get("proven_optimal", False)),
            gap=meta.get("gap"),
            heuristic=bool(meta.get("heuristic", False)),
            alpha=meta.get("alpha"),
            beta=meta.get("beta"),
            mode=meta.get("mode"),
        ),
    )


# ─── Text helpers ────────────────────────────────────────────────────

def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


def dump_instance(instance: ProblemInstance) -> str:
    return dumps(instance_to_dict(instance))


def load_instance(text: str) -> ProblemInstance:
    return instance_from_dict(json.loads(text))


def dump_scenario(scenario: Scenario) -> str:
    return dumps(scenario_to_dict(scenario))


def load_scenario(text: str) -> Scenario:
    return scenario_from_dict(json.loads(text))


def dump_solution(solution: HubSolution, *, include_meta: bool = True) -> str:
    return dumps(solution_to_dict(solution, include_meta=include_meta))


def load_solution(text: str) -> HubSolution:
    return solution_from_dict(json.loads(text))
