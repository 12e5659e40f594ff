# File: skyport/ingest/costs.py
"""Trips → travel-cost and demand matrices → ProblemInstance."""

from __future__ import annotations

import logging
import math
import os
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from skyport.errors import DataError, TripFormatError
from skyport.ingest.geo import aerial_cost_matrix, reference_latitude
from skyport.ingest.trips import IngestConfig, IngestStats, TripTable
from skyport.models import ProblemInstance, Zone

logger = logging.getLogger(__name__)

ZONE_COLUMNS = ["zone_id", "name", "lat", "lon", "is_airport"]
_TRUTHY = {"1", "true", "t", "yes", "y"}


def _zone_ids(zones) -> list[int]:
    return [z.id if isinstance(z, Zone) else int(z) for z in zones]


# ─── Zones ───────────────────────────────────────────────────────────

def read_zones(source: str | os.PathLike) -> list[Zone]:
    """Parse the zones CSV (zone_id,name,lat,lon,is_airport); blank coordinates stay None."""
    df = pd.read_csv(source, dtype=str, keep_default_na=False)
    lower_map = {c.strip().lower(): c for c in df.columns}
    for col in ZONE_COLUMNS:
        if col not in lower_map:
            raise TripFormatError(col, f"zones file is missing column '{col}'")

    def _coord(value: str):
        value = value.strip()
        return float(value) if value else None

    zones = []
    for rec in df.to_dict(orient="records"):
        zones.append(Zone(
            id=int(rec[lower_map["zone_id"]]),
            name=rec[lower_map["name"]].strip(),
            lat=_coord(rec[lower_map["lat"]]),
            lon=_coord(rec[lower_map["lon"]]),
            is_airport=rec[lower_map["is_airport"]].strip().lower() in _TRUTHY,
        ))
    return zones


# ─── Matrices ────────────────────────────────────────────────────────

def build_ground_costs(trips, zones: Iterable | None = None,
                       config: IngestConfig | None = None) -> pd.DataFrame:
    """
    Mean retained duration (minutes) per ordered (origin, destination) zone pair.
    Rows/columns are zone ids; pairs without retained trips are NaN (absent).
    """
    table = TripTable.coerce(trips).retained(config)
    means = (
        table.frame.groupby(["origin_zone", "dest_zone"])["duration_min"]
        .mean()
        .unstack("dest_zone")
    )
    if zones is not None:
        ids = _zone_ids(zones)
        means = means.reindex(index=ids, columns=ids)
    means.index.name, means.columns.name = "origin_zone", "dest_zone"
    return means.astype(float)


def build_demand(trips, airports: Iterable, origins: Iterable | None = None,
                 config: IngestConfig | None = None) -> pd.DataFrame:
    """
    Count of retained trips from each origin to each airport.
    Without `origins`, rows are every non-airport zone seen as a trip origin.
    """
    table = TripTable.coerce(trips).retained(config)
    airport_ids = _zone_ids(airports)
    frame = table.frame[table.frame["dest_zone"].isin(airport_ids)]
    counts = frame.groupby(["origin_zone", "dest_zone"]).size().unstack("dest_zone")

    if origins is None:
        seen = pd.Index(table.frame["origin_zone"].unique())
        row_ids = sorted(int(z) for z in seen if int(z) not in set(airport_ids))
    else:
        row_ids = _zone_ids(origins)

    demand = counts.reindex(index=row_ids, columns=airport_ids).fillna(0).astype("int64")
    demand.index.name, demand.columns.name = "origin_zone", "airport"
    return demand


def prune_zones(demand: pd.DataFrame, keep: int | None = None,
                quantile: float | None = None) -> list[int]:
    """
    Origin ids ranked by total airport demand (descending, ties → lower id),
    truncated to `keep` zones or the top `quantile` fraction.
    """
    totals = demand.sum(axis=1)
    ranked = sorted(totals.index, key=lambda z: (-totals[z], int(z)))
    n = len(ranked)

    if quantile is not None:
        keep = math.ceil(quantile * n)
    if keep is None:
        return [int(z) for z in ranked]
    if keep > n:
        logger.warning(f"prune_zones: keep={keep} exceeds {n} available zones, keeping all")
        keep = n
    return [int(z) for z in ranked[:keep]]


# ─── Instance assembly ───────────────────────────────────────────────

def build_instance(trips, zones: Sequence[Zone],
                   config: IngestConfig | None = None,
                   stats: IngestStats | None = None) -> tuple[ProblemInstance, IngestStats]:
    """
    Candidate set = non-airport zones (pruned), airports = flagged zones.
    Origins are ordered by zone id; diagonal ground costs are 0.
    `stats` from parse_trips, when given, is completed in place.
    """
    config = config or IngestConfig()
    table = TripTable.coerce(trips).retained(config)
    if stats is None:
        stats = IngestStats(rows_read=len(table), retained=len(table))

    airports = sorted((z for z in zones if z.is_airport), key=lambda z: z.id)
    if not airports:
        raise DataError("zones file flags no airport")
    candidates = sorted((z for z in zones if not z.is_airport), key=lambda z: z.id)

    known = {z.id for z in zones}
    unknown = ~(table.frame["origin_zone"].isin(known) & table.frame["dest_zone"].isin(known))
    stats.unknown_zone = int(unknown.sum())
    if stats.unknown_zone:
        logger.warning(f"build_instance: {stats.unknown_zone} trips reference zones missing from the zones file")
    table = TripTable(table.frame[~unknown])

    demand = build_demand(table, airports, candidates, config)
    kept = set(prune_zones(demand, config.prune_keep, config.prune_quantile))
    origins = [z for z in candidates if z.id in kept]

    missing = [z.id for z in origins if not z.has_coordinates]
    if missing:
        logger.warning(f"build_instance: origins without coordinates cannot host hubs: {missing}")

    ground = build_ground_costs(table, origins + airports, config)
    ground = ground.loc[[z.id for z in origins]].to_numpy(dtype=float, copy=True)
    np.fill_diagonal(ground[:, : len(origins)], 0.0)

    ref_lat = reference_latitude(origins + airports)
    aerial = aerial_cost_matrix(origins, airports, config.airspeed, ref_lat)

    instance = ProblemInstance(
        origins=tuple(origins),
        airports=tuple(airports),
        ground_cost=ground,
        aerial_cost=aerial,
        demand=demand.loc[[z.id for z in origins]].to_numpy(),
    )
    logger.info(f"build_instance: {instance.n_origins} origins, {instance.n_airports} airports")
    return instance, stats
