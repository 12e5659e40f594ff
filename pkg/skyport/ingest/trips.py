# File: skyport/ingest/trips.py
"""Trip-record parsing: raw CSV rows → validated, duration-filtered trips."""

from __future__ import annotations

import csv
import io
import logging
import os
from dataclasses import asdict, dataclass
from datetime import datetime
from typing import Iterable, Iterator, TextIO

import pandas as pd

from skyport.common.cleaners import TRIP_COLUMNS, drop_malformed_rows, split_by_duration
from skyport.errors import ScenarioError, TripFormatError

logger = logging.getLogger(__name__)

TIME_FORMAT = "%Y-%m-%d %H:%M:%S"

# Canonical column → accepted header spellings (compared lower-cased)
COLUMN_ALIASES = {
    "pickup_datetime":  ("pickup_datetime", "tpep_pickup_datetime", "lpep_pickup_datetime"),
    "dropoff_datetime": ("dropoff_datetime", "tpep_dropoff_datetime", "lpep_dropoff_datetime"),
    "PULocationID":     ("pulocationid", "pu_location_id", "pickup_location_id"),
    "DOLocationID":     ("dolocationid", "do_location_id", "dropoff_location_id"),
}


@dataclass(frozen=True)
class TripRecord:
    pickup_time:  datetime
    dropoff_time: datetime
    origin_zone:  int
    dest_zone:    int

    @property
    def duration_minutes(self) -> float:
        return (self.dropoff_time - self.pickup_time).total_seconds() / 60.0


@dataclass(frozen=True)
class IngestConfig:
    airspeed:         float = 150.0
    load_unload:      float = 2.0
    min_trip_minutes: float = 1.0
    max_trip_minutes: float = 300.0
    prune_keep:       int | None = None
    prune_quantile:   float | None = None
    chunk_rows:       int = 500_000

    def __post_init__(self):
        if self.airspeed <= 0:
            raise ScenarioError(f"airspeed must be > 0, got {self.airspeed}")
        if not 0 <= self.min_trip_minutes < self.max_trip_minutes:
            raise ScenarioError(
                f"need 0 <= min_trip_minutes < max_trip_minutes, got "
                f"{self.min_trip_minutes}, {self.max_trip_minutes}"
            )
        if self.prune_keep is not None and self.prune_keep < 0:
            raise ScenarioError(f"prune_keep must be >= 0, got {self.prune_keep}")
        if self.prune_quantile is not None and not 0 <= self.prune_quantile <= 1:
            raise ScenarioError(f"prune_quantile must lie in [0, 1], got {self.prune_quantile}")
        if self.prune_keep is not None and self.prune_quantile is not None:
            raise ScenarioError("set either prune_keep or prune_quantile, not both")


@dataclass
class IngestStats:
    rows_read:         int = 0
    retained:          int = 0
    malformed:         int = 0
    negative_duration: int = 0
    too_short:         int = 0
    too_long:          int = 0
    unknown_zone:      int = 0

    def add(self, **counts):
        for key, value in counts.items():
            setattr(self, key, getattr(self, key) + value)

    def to_dict(self) -> dict:
        return asdict(self)


class TripTable:
    """
    Retained trips as a DataFrame with the canonical TRIP_COLUMNS.
    Iterating yields TripRecord objects.
    """

    def __init__(self, frame: pd.DataFrame | None = None):
        if frame is None:
            frame = pd.DataFrame({
                "pickup_time":  pd.Series([], dtype="datetime64[ns]"),
                "dropoff_time": pd.Series([], dtype="datetime64[ns]"),
                "origin_zone":  pd.Series([], dtype="int64"),
                "dest_zone":    pd.Series([], dtype="int64"),
                "duration_min": pd.Series([], dtype="float64"),
            })
        self.frame = frame[TRIP_COLUMNS].reset_index(drop=True)

    @classmethod
    def from_records(cls, records: Iterable[TripRecord]) -> TripTable:
        rows = [
            (r.pickup_time, r.dropoff_time, int(r.origin_zone), int(r.dest_zone)) for r in records
        ]
        if not rows:
            return cls()
        frame = pd.DataFrame(rows, columns=TRIP_COLUMNS[:4])
        frame["pickup_time"] = pd.to_datetime(frame["pickup_time"])
        frame["dropoff_time"] = pd.to_datetime(frame["dropoff_time"])
        frame["duration_min"] = (frame["dropoff_time"] - frame["pickup_time"]).dt.total_seconds() / 60.0
        return cls(frame)

    @classmethod
    def coerce(cls, trips) -> TripTable:
        if isinstance(trips, TripTable):
            return trips
        if isinstance(trips, pd.DataFrame):
            return cls(trips)
        return cls.from_records(trips)

    def retained(self, config: IngestConfig | None = None) -> TripTable:
        config = config or IngestConfig()
        kept, _ = split_by_duration(self.frame, config.min_trip_minutes, config.max_trip_minutes)
        return TripTable(kept)

    @property
    def days(self) -> int:
        """Number of distinct calendar days touched by pickups."""
        if self.frame.empty:
            return 0
        return int(self.frame["pickup_time"].dt.normalize().nunique())

    def __len__(self) -> int:
        return len(self.frame)

    def __iter__(self) -> Iterator[TripRecord]:
        for row in self.frame.itertuples(index=False):
            yield TripRecord(
                row.pickup_time.to_pydatetime(),
                row.dropoff_time.to_pydatetime(),
                int(row.origin_zone),
                int(row.dest_zone),
            )

    def __repr__(self):
        return f'<TripTable {len(self)} trips>'


def resolve_columns(header: list[str]) -> dict[str, str]:
    """Map canonical names to the file's header names; raise naming the first missing one."""
    lower_map = {h.strip().lower(): h for h in header}
    resolved = {}
    for canonical, aliases in COLUMN_ALIASES.items():
        hit = next((lower_map[a] for a in (canonical.lower(),) + aliases if a in lower_map), None)
        if hit is None:
            raise TripFormatError(canonical)
        resolved[canonical] = hit
    return resolved


def parse_trips(source: str | os.PathLike | TextIO,
                config: IngestConfig | None = None,
                time_format: str | None = TIME_FORMAT) -> tuple[TripTable, IngestStats]:
    """
    Read a trips CSV (path or text stream) into a TripTable.

    Malformed rows are counted and skipped, never aborting the run; rows with
    dropoff before pickup or outside the duration bounds are counted by reason.
    Undecodable bytes are replaced, so their row fails coercion as malformed.
    """
    config = config or IngestConfig()
    stats = IngestStats()

    if isinstance(source, (str, os.PathLike)):
        handle = open(source, newline="", encoding="utf-8-sig", errors="replace")
        owns = True
    else:
        handle = source
        owns = False

    try:
        header_line = handle.readline()
        if not header_line.strip():
            raise TripFormatError("pickup_datetime", "trips file has no header row")
        header = next(csv.reader(io.StringIO(header_line)))
        cols = resolve_columns(header)

        bad_lines = []

        def _on_bad_line(fields):
            bad_lines.append(fields)
            return None

        parts = []
        try:
            reader = pd.read_csv(
                handle,
                header=None,
                names=header,
                index_col=False,
                dtype=str,
                engine="python",
                on_bad_lines=_on_bad_line,
                skip_blank_lines=True,
                chunksize=config.chunk_rows,
            )
            for chunk in reader:
                if chunk.empty:
                    continue
                stats.rows_read += len(chunk)
                frame, malformed = drop_malformed_rows(
                    chunk,
                    cols["pickup_datetime"], cols["dropoff_datetime"],
                    cols["PULocationID"], cols["DOLocationID"],
                    time_format,
                )
                kept, counts = split_by_duration(frame, config.min_trip_minutes, config.max_trip_minutes)
                stats.add(malformed=malformed, **counts)
                parts.append(kept)
        except pd.errors.EmptyDataError:
            logger.info("parse_trips: no data rows after the header")

        stats.rows_read += len(bad_lines)
        stats.malformed += len(bad_lines)
    finally:
        if owns:
            handle.close()

    table = TripTable(pd.concat(parts, ignore_index=True)) if parts else TripTable()
    stats.retained = len(table)

    if stats.malformed:
        logger.warning(f"parse_trips: skipped {stats.malformed} malformed rows")
    logger.info(
        f"parse_trips: {stats.retained}/{stats.rows_read} trips retained "
        f"(negative={stats.negative_duration}, short={stats.too_short}, long={stats.too_long})"
    )
    return table, stats
