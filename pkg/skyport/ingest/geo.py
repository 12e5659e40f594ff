# File: skyport/ingest/geo.py
"""
Planar distances for air-taxi legs.

Coordinates are projected equirectangularly about one reference latitude
(Δx = R·cos φ̄·Δλ, Δy = R·Δφ) and measured with the Euclidean norm, so the
result is a true planar metric for a fixed reference.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from skyport.errors import DataError
from skyport.models import Zone

EARTH_RADIUS_MILES = 3958.8


def planar_miles(lat1, lon1, lat2, lon2, ref_lat=None):
    """Equirectangular distance in miles; broadcasts over numpy arrays."""
    lat1, lon1, lat2, lon2 = (np.asarray(v, dtype=float) for v in (lat1, lon1, lat2, lon2))
    if ref_lat is None:
        ref_lat = (lat1 + lat2) / 2.0
    dx = EARTH_RADIUS_MILES * np.cos(np.radians(ref_lat)) * np.radians(lon2 - lon1)
    dy = EARTH_RADIUS_MILES * np.radians(lat2 - lat1)
    return np.hypot(dx, dy)


def aerial_cost(origin: Zone, dest: Zone, airspeed: float = 150.0,
                ref_lat: float | None = None) -> float:
    """
    Flight minutes between two zones at a constant airspeed (mph).
    Without ref_lat the projection is centred on the pair's mean latitude.
    """
    if airspeed <= 0:
        raise DataError(f"airspeed must be positive, got {airspeed}")
    for z in (origin, dest):
        if not z.has_coordinates:
            raise DataError(f"zone {z.id} has no coordinates")
    miles = planar_miles(origin.lat, origin.lon, dest.lat, dest.lon, ref_lat)
    return float(miles) / airspeed * 60.0


def reference_latitude(zones: Sequence[Zone]) -> float:
    lats = [z.lat for z in zones if z.has_coordinates]
    if not lats:
        raise DataError("no zone carries coordinates")
    return math.fsum(lats) / len(lats)


def aerial_cost_matrix(hubs: Sequence[Zone], airports: Sequence[Zone], airspeed: float = 150.0,
                       ref_lat: float | None = None) -> np.ndarray:
    """
    |hubs| × |airports| flight minutes; NaN where either zone lacks coordinates.
    The default reference latitude is the mean over all zones passed in.
    """
    if airspeed <= 0:
        raise DataError(f"airspeed must be positive, got {airspeed}")
    if ref_lat is None:
        ref_lat = reference_latitude(list(hubs) + list(airports))

    def _coords(zones):
        lat = np.array([z.lat if z.has_coordinates else np.nan for z in zones], dtype=float)
        lon = np.array([z.lon if z.has_coordinates else np.nan for z in zones], dtype=float)
        return lat, lon

    hlat, hlon = _coords(hubs)
    alat, alon = _coords(airports)
    miles = planar_miles(hlat[:, None], hlon[:, None], alat[None, :], alon[None, :], ref_lat)
    return miles / airspeed * 60.0
