# File: skyport/queueing/profiles.py
"""Hour-of-day arrival profiles at selected hubs."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from skyport.errors import UndefinedInputError
from skyport.ingest.trips import TripTable
from skyport.models import HubSolution, ProblemInstance, RouteKind, Scenario

logger = logging.getLogger(__name__)

HOURS = 24


@dataclass(frozen=True)
class DemandProfile:
    hub:    int
    hourly: tuple[float, ...]

    def __post_init__(self):
        hourly = tuple(float(v) for v in self.hourly)
        if len(hourly) != HOURS:
            raise ValueError(f"profile needs {HOURS} hourly values, got {len(hourly)}")
        if any(v < 0 for v in hourly):
            raise ValueError("hourly arrivals must be >= 0")
        object.__setattr__(self, "hourly", hourly)

    @property
    def peak(self) -> float:
        """λ_k, the busiest hour's average arrivals."""
        return max(self.hourly)

    @property
    def peak_hour(self) -> int:
        return int(np.argmax(self.hourly))


@dataclass(frozen=True)
class ProfileResult:
    profiles: dict[int, DemandProfile]
    days:     int
    routed:   int   # trips assigned to some hub
    skipped:  int   # airport trips whose origin is not in the instance


def hub_arrival_profiles(solution: HubSolution, trips, scenario: Scenario,
                         instance: ProblemInstance, congested_access: bool = True) -> ProfileResult:
    """
    Arrival instant = pickup + ground access time to the allocated hub
    (β·c_ik, or c_ik with congested_access=False); arrivals are bucketed by
    hour of day and divided by the number of calendar days in the data.
    """
    table = TripTable.coerce(trips)
    frame = table.frame
    days = table.days
    airports = set(instance.airport_ids)
    origins = set(instance.origin_ids)

    to_airport = frame[frame["dest_zone"].isin(airports)]
    known = to_airport["origin_zone"].isin(origins)
    skipped = int((~known).sum())
    if skipped:
        logger.warning(f"hub_arrival_profiles: skipped {skipped} airport trips from pruned or unknown zones")
    to_airport = to_airport[known]

    beta = scenario.beta if congested_access else 1.0
    hub_of, access = {}, {}
    for (i, j), route in solution.routing.items():
        if route.kind is RouteKind.VIA_HUB:
            hub_of[(i, j)] = route.hub
            c_ik = instance.access_cost[instance.origin_index(i), instance.origin_index(route.hub)]
            access[(i, j)] = beta * c_ik

    pairs = list(zip(to_airport["origin_zone"], to_airport["dest_zone"]))
    hubs = pd.Series([hub_of.get(pr) for pr in pairs], index=to_airport.index, dtype="object")
    minutes = pd.Series([access.get(pr, np.nan) for pr in pairs], index=to_airport.index, dtype=float)
    routed_mask = hubs.notna()

    arrivals = to_airport.loc[routed_mask, "pickup_time"] + pd.to_timedelta(minutes[routed_mask], unit="m")
    buckets = pd.DataFrame({"hub": hubs[routed_mask].astype("int64"), "hour": arrivals.dt.hour})
    totals = {hub: np.zeros(HOURS) for hub in solution.hubs}
    for (hub, hour), n in buckets.groupby(["hub", "hour"]).size().items():
        totals[int(hub)][int(hour)] += n

    profiles = {
        hub: DemandProfile(hub, tuple(hourly / days if days else hourly))
        for hub, hourly in totals.items()
    }

    return ProfileResult(profiles=profiles, days=days, routed=int(routed_mask.sum()), skipped=skipped)


def lambda_max(profiles) -> float:
    """λ_p^max: the largest hub peak."""
    values = list(profiles.values()) if isinstance(profiles, dict) else list(profiles)
    if not values:
        raise UndefinedInputError("lambda_max needs at least one profile")
    return max(p.peak for p in values)


def profiles_frame(profiles: dict[int, DemandProfile]) -> pd.DataFrame:
    """One row per hub: hub, hour_0 … hour_23, peak."""
    columns = ["hub"] + [f"hour_{h}" for h in range(HOURS)] + ["peak"]
    rows = [
        [hub, *profile.hourly, profile.peak]
        for hub, profile in sorted(profiles.items())
    ]
    return pd.DataFrame(rows, columns=columns)
