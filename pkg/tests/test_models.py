import json
import math

import numpy as np
import pytest

from skyport.errors import InvalidInstanceError, ScenarioError
from skyport.models import (
    AllocationMode, HubSolution, ProblemInstance, Route, RouteKind, Scenario,
    SolverMeta, TieBreak, Zone, validate,
)
from skyport.serialization import (
    dump_instance, dump_scenario, dump_solution, load_instance, load_scenario, load_solution,
    solution_from_dict, solution_to_dict,
)
from skyport.solver import solve


# ─── Zone / instance ─────────────────────────────────────────────────

def test_zone_rejects_out_of_range_coordinates():
    with pytest.raises(InvalidInstanceError):
        Zone(1, lat=91.0, lon=0.0)
    with pytest.raises(InvalidInstanceError):
        Zone(1, lat=0.0, lon=-181.0)
    assert not Zone(1).has_coordinates
    assert Zone(1, lat=40.7, lon=-74.0).has_coordinates


def test_instance_arrays_are_read_only(tiny_instance):
    with pytest.raises(ValueError):
        tiny_instance.ground_cost[0, 1] = 99.0
    assert tiny_instance.demand.dtype.kind == "i"


def test_instance_shape_mismatch():
    with pytest.raises(InvalidInstanceError):
        ProblemInstance((Zone(1),), (Zone(9, is_airport=True),), np.zeros((1, 3)), np.zeros((1, 1)), np.zeros((1, 1)))


def test_views_and_variable_count(tiny_instance):
    assert tiny_instance.access_cost.shape == (2, 2)
    assert tiny_instance.direct_cost.tolist() == [[30.0], [20.0]]
    assert tiny_instance.demand_pairs() == [(1, 9), (2, 9)]
    # N²|J| + N + N|J|
    assert tiny_instance.binary_variable_count == 4 + 2 + 2


def test_validate_clean_instance(tiny_instance):
    assert validate(tiny_instance) == []


def test_validate_reports_each_problem():
    origins = (Zone(1), Zone(2), Zone(2))
    airports = (Zone(9, is_airport=True),)
    ground = np.array([
        [0.0, 1.0, 2.0, np.nan],
        [1.0, 3.0, -1.0, 4.0],
        [1.0, 1.0, 0.0, np.inf],
    ])
    aerial = np.array([[1.0], [-2.0], [1.0]])
    demand = np.array([[1.0], [0.5], [-1.0]])
    problems = validate(ProblemInstance(origins, airports, ground, aerial, demand))

    assert "duplicate zone id 2" in problems
    assert "unroutable demand pair (1 → 9)" in problems
    assert "nonzero diagonal ground cost at zone 2" in problems
    assert "negative ground cost (2 → 2)" in problems
    assert "non-finite ground cost (2 → 9)" in problems
    assert "negative aerial cost (2 → 9)" in problems
    assert "non-integer demand (2 → 9)" in problems
    assert "negative demand (2 → 9)" in problems


def test_validate_flags_missing_airports():
    instance = ProblemInstance((Zone(1),), (), np.zeros((1, 1)), np.zeros((1, 0)), np.zeros((1, 0)))
    assert "no airports" in validate(instance)


# ─── Scenario ────────────────────────────────────────────────────────

@pytest.mark.parametrize("kwargs", [
    {"alpha": -1},
    {"beta": 0.9},
    {"p": -1},
    {"p": 1.5},
    {"allocation_mode": "both"},
])
def test_scenario_rejects_out_of_range(kwargs):
    with pytest.raises(ScenarioError):
        Scenario(**kwargs)


def test_scenario_coerces_enums_and_checks_p(tiny_instance):
    s = Scenario(10, 1.1, 2, "single-origin", "hub-then-lowest-id")
    assert s.allocation_mode is AllocationMode.SINGLE_PER_ORIGIN
    assert s.tie_break is TieBreak.HUB_THEN_LOWEST_ID
    assert s.label == "a10_b1.1"
    s.check_against(tiny_instance)
    with pytest.raises(ScenarioError):
        Scenario(p=3).check_against(tiny_instance)
    assert s.with_p(0).p == 0 and s.with_p(0).alpha == 10


# ─── Routes & solutions ──────────────────────────────────────────────

def test_route_hub_iff_via():
    with pytest.raises(InvalidInstanceError):
        Route(RouteKind.DIRECT, 5.0, hub=3)
    with pytest.raises(InvalidInstanceError):
        Route(RouteKind.VIA_HUB, 5.0)


def test_solution_rejects_closed_hub():
    with pytest.raises(InvalidInstanceError):
        HubSolution((1,), {(2, 9): Route(RouteKind.VIA_HUB, 3.0, 2)}, 3.0, 0)


def test_solution_reporting():
    sol = HubSolution((233,), {}, 11_620_000.0, 149)
    assert sol.objective_millions == 11.62
    assert sol.percent_decrease(19_530_000.0) == pytest.approx(40.5, abs=0.01)
    assert HubSolution((), {}, 19_530_000.0, 200).percent_decrease(19_530_000.0) is None


def test_recompute_objective(tiny_instance):
    routing = {
        (1, 9): Route(RouteKind.VIA_HUB, 15.0, 2),
        (2, 9): Route(RouteKind.VIA_HUB, 10.0, 2),
    }
    sol = HubSolution((2,), routing, 190.0, 0)
    assert sol.recompute_objective(tiny_instance) == 190.0


# ─── JSON ────────────────────────────────────────────────────────────

def test_instance_json_keeps_absent_costs_as_null(tiny_instance):
    ground = tiny_instance.ground_cost.copy()
    ground[0, 1] = np.nan
    instance = ProblemInstance(tiny_instance.origins, tiny_instance.airports, ground,
                               tiny_instance.aerial_cost, tiny_instance.demand)
    text = dump_instance(instance)
    assert "NaN" not in text
    doc = json.loads(text)
    assert doc["ground_cost"][0][1] is None

    back = load_instance(text)
    assert back == instance
    assert math.isnan(back.ground_cost[0, 1])


def test_scenario_json():
    s = Scenario(15, 1.1, 4, "single-origin")
    assert load_scenario(dump_scenario(s)) == s


def test_solution_json_without_meta_time():
    sol = HubSolution(
        (2,), {(1, 9): Route(RouteKind.DIRECT, 30.0)}, 300.0, 1,
        SolverMeta(solver="brute-force", iterations=2, wall_time=0.25, proven_optimal=True, gap=0.0),
    )
    assert "wall_time" not in solution_to_dict(sol, include_meta=False)["meta"]
    back = load_solution(dump_solution(sol))
    assert back == sol
    assert back.meta.wall_time == 0.25 and back.meta.proven_optimal


def test_solution_json_keeps_scenario(tiny_instance):
    scenario = Scenario(alpha=10, beta=1.1, p=1, allocation_mode="single-origin")
    sol = solve(tiny_instance, scenario)
    assert (sol.meta.alpha, sol.meta.beta, sol.meta.mode) == (10, 1.1, "single-origin")

    back = load_solution(dump_solution(sol, include_meta=False))
    assert (back.meta.alpha, back.meta.beta, back.meta.mode) == (10, 1.1, "single-origin")
    # solutions written before the scenario was recorded
    doc = solution_to_dict(sol)
    del doc["meta"]["beta"]
    assert solution_from_dict(doc).meta.beta is None
