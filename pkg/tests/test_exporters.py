import json

import numpy as np
import pytest

from conftest import random_instance
from skyport.allocation import evaluate_hub_set
from skyport.exporters import route_features, solution_geojson
from skyport.models import ProblemInstance, Scenario, Zone
from skyport.solver import solve


def _roles(collection):
    return {
        f["properties"]["zone"]: f["properties"]["role"]
        for f in collection["features"] if "role" in f["properties"]
    }


def test_hub_solution_map(tiny_instance):
    solution = solve(tiny_instance, Scenario(p=1))
    collection = json.loads(json.dumps(solution_geojson(tiny_instance, solution)))

    assert collection["type"] == "FeatureCollection"
    assert _roles(collection) == {1: "origin", 2: "hub", 9: "airport"}

    routes = route_features(collection)
    assert len(routes) == 2
    first = routes[0]
    assert first["properties"] == {"origin": 1, "airport": 9, "demand": 10, "cost": 15.0, "kind": "VIA_HUB", "hub": 2}
    assert first["geometry"]["type"] == "LineString"
    assert first["geometry"]["coordinates"] == [[-73.95, 40.80], [-73.98, 40.75], [-73.78, 40.64]]


def test_no_hubs_means_direct_edges(tiny_instance):
    solution = evaluate_hub_set((), Scenario(), tiny_instance).to_solution(())
    collection = solution_geojson(tiny_instance, solution)
    routes = route_features(collection)
    assert [r["properties"]["kind"] for r in routes] == ["DIRECT", "DIRECT"]
    assert all(len(r["geometry"]["coordinates"]) == 2 for r in routes)
    assert "hub" not in _roles(collection).values()


def test_one_edge_per_positive_demand_pair():
    rng = np.random.default_rng(31)
    for _ in range(20):
        instance = random_instance(rng, 6, 3)
        # random_instance carries no coordinates, so every geometry is null
        solution = solve(instance, Scenario(alpha=10, p=2))
        routes = route_features(solution_geojson(instance, solution))
        assert len(routes) == len(instance.demand_pairs())
        assert all(r["geometry"] is None for r in routes)
        assert all(r["properties"]["demand"] > 0 for r in routes)


def test_missing_coordinates_keep_the_feature(tiny_instance):
    origins = (Zone(1, "North"), tiny_instance.origins[1])
    instance = ProblemInstance(origins, tiny_instance.airports, tiny_instance.ground_cost,
                               tiny_instance.aerial_cost, tiny_instance.demand)
    solution = solve(instance, Scenario(p=1))
    collection = solution_geojson(instance, solution)

    points = {f["properties"]["zone"]: f["geometry"] for f in collection["features"] if "role" in f["properties"]}
    assert points[1] is None and points[2]["type"] == "Point"
    routes = {r["properties"]["origin"]: r["geometry"] for r in route_features(collection)}
    assert routes[1] is None
    assert routes[2]["type"] == "LineString"


@pytest.mark.parametrize("p", [1, 2])
def test_collection_is_valid_json(tiny_instance, p):
    solution = solve(tiny_instance, Scenario(alpha=10, beta=1.1, p=p))
    text = json.dumps(solution_geojson(tiny_instance, solution), allow_nan=False)
    assert json.loads(text)["features"]
