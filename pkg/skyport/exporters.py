# File: skyport/exporters.py
"""GeoJSON map of a hub solution: zone points plus one edge chain per routed pair."""

from __future__ import annotations

import logging

from shapely.geometry import LineString, Point, mapping

from skyport.models import HubSolution, ProblemInstance, RouteKind, Zone

logger = logging.getLogger(__name__)


def _position(zone: Zone):
    return (float(zone.lon), float(zone.lat)) if zone.has_coordinates else None


def _zone_feature(zone: Zone, role: str) -> dict:
    pos = _position(zone)
    return {
        "type": "Feature",
        "properties": {"zone": zone.id, "name": zone.name, "role": role},
        "geometry": mapping(Point(pos)) if pos else None,
    }


def solution_geojson(instance: ProblemInstance, solution: HubSolution) -> dict:
    """
    FeatureCollection with a Point per zone (role origin / hub / airport) and a
    LineString per routed pair: origin → hub → airport, or origin → airport.
    Zones without coordinates keep their feature with a null geometry.
    """
    zones = {z.id: z for z in instance.origins + instance.airports}
    hubs = set(solution.hubs)
    features = []

    for z in instance.origins:
        features.append(_zone_feature(z, "hub" if z.id in hubs else "origin"))
    for z in instance.airports:
        features.append(_zone_feature(z, "airport"))

    missing = 0
    for (i, j), route in sorted(solution.routing.items()):
        stops = [i, route.hub, j] if route.kind is RouteKind.VIA_HUB else [i, j]
        points = [_position(zones[s]) for s in stops]
        geometry = None
        if all(points):
            geometry = mapping(LineString(points))
        else:
            missing += 1

        props = {
            "origin":  i,
            "airport": j,
            "demand":  int(instance.demand[instance.origin_index(i), instance.airport_index(j)]),
            "cost":    route.cost,
            "kind":    route.kind.value,
        }
        if route.kind is RouteKind.VIA_HUB:
            props["hub"] = route.hub
        features.append({"type": "Feature", "properties": props, "geometry": geometry})

    if missing:
        logger.warning(f"solution_geojson: {missing} routed pairs lack coordinates, geometry left null")

    return {"type": "FeatureCollection", "features": features}


def route_features(collection: dict) -> list[dict]:
    """The edge features of a collection built by solution_geojson."""
    return [f for f in collection["features"] if "kind" in f["properties"]]
