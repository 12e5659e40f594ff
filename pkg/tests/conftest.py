import os
from datetime import datetime, timedelta

import hypothesis.strategies as st
import numpy as np
import pytest

from skyport.ingest import TripRecord, TripTable
from skyport.models import ProblemInstance, Zone


# ─── Random instances ────────────────────────────────────────────────

def random_instance(rng: np.random.Generator, n: int, m: int, *,
                    integer_costs: bool = False, max_demand: int = 20,
                    zero_share: float = 0.2) -> ProblemInstance:
    """
    N candidate origins with shuffled ids, m airports (ids 1000+), uniform
    ground/aerial minutes and integer demand with some zero pairs.
    """
    ids = rng.choice(np.arange(1, 10 * n + 10), size=n, replace=False)
    origins = tuple(Zone(int(z), name=f"zone {z}") for z in ids)
    airports = tuple(Zone(1000 + j, name=f"airport {j}", is_airport=True) for j in range(m))

    if integer_costs:
        ground = rng.integers(1, 60, size=(n, n + m)).astype(float)
        aerial = rng.integers(2, 20, size=(n, m)).astype(float)
    else:
        ground = rng.uniform(1.0, 60.0, size=(n, n + m))
        aerial = rng.uniform(2.0, 20.0, size=(n, m))
    np.fill_diagonal(ground[:, :n], 0.0)

    demand = rng.integers(1, max_demand + 1, size=(n, m))
    demand[rng.random((n, m)) < zero_share] = 0
    return ProblemInstance(origins, airports, ground, aerial, demand)


@st.composite
def instances(draw, max_n=8, max_m=3, integer_costs=False):
    n = draw(st.integers(min_value=1, max_value=max_n))
    m = draw(st.integers(min_value=1, max_value=max_m))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_instance(np.random.default_rng(seed), n, m, integer_costs=integer_costs)


@st.composite
def hub_sets(draw, instance):
    ids = list(instance.origin_ids)
    return tuple(draw(st.lists(st.sampled_from(ids), unique=True, max_size=len(ids))))


# ─── Hand-built fixtures ─────────────────────────────────────────────

@pytest.fixture
def tiny_instance():
    """
    Two origins (1, 2) and one airport (9).
      zone 1: 10 trips, 30 min by road; via hub 2: 5 + 10 = 15 min
      zone 2: 4 trips, 20 min by road; via itself: 0 + 10 = 10 min
    """
    origins = (Zone(1, "North", 40.80, -73.95), Zone(2, "Midtown", 40.75, -73.98))
    airports = (Zone(9, "JFK", 40.64, -73.78, is_airport=True),)
    ground = np.array([
        [0.0, 5.0, 30.0],
        [6.0, 0.0, 20.0],
    ])
    aerial = np.array([[12.0], [10.0]])
    demand = np.array([[10], [4]])
    return ProblemInstance(origins, airports, ground, aerial, demand)


@pytest.fixture
def three_zone_files(tmp_path):
    """Zones and trips CSVs for two boroughs and one airport."""
    zones = tmp_path / "zones.csv"
    zones.write_text(
        "zone_id,name,lat,lon,is_airport\n"
        "1,North,40.80,-73.95,0\n"
        "2,Midtown,40.75,-73.98,0\n"
        "9,JFK,40.64,-73.78,1\n"
    )
    trips = tmp_path / "trips.csv"
    trips.write_text(
        "pickup_datetime,dropoff_datetime,PULocationID,DOLocationID\n"
        "2018-01-01 08:00:00,2018-01-01 08:30:00,1,9\n"
        "2018-01-01 09:00:00,2018-01-01 09:40:00,1,9\n"
        "2018-01-01 08:10:00,2018-01-01 08:30:00,2,9\n"
        "2018-01-01 10:00:00,2018-01-01 10:06:00,1,2\n"
        "2018-01-02 10:00:00,2018-01-02 10:04:00,1,2\n"
        "2018-01-02 11:00:00,2018-01-02 11:08:00,2,1\n"
        "not a date,2018-01-02 11:08:00,2,1\n"
    )
    return trips, zones


def make_trips(rows) -> TripTable:
    """rows: (pickup 'YYYY-mm-dd HH:MM', minutes, origin, dest)."""
    records = []
    for pickup, minutes, origin, dest in rows:
        start = datetime.strptime(pickup, "%Y-%m-%d %H:%M")
        records.append(TripRecord(start, start + timedelta(minutes=minutes), origin, dest))
    return TripTable.from_records(records)


@pytest.fixture
def trips_from():
    return make_trips


# ─── Dataset-conditional ─────────────────────────────────────────────

@pytest.fixture(scope="session")
def nyc_files():
    trips = os.getenv("SKYPORT_NYC_TRIPS")
    zones = os.getenv("SKYPORT_NYC_ZONES")
    if not trips or not zones or not (os.path.isfile(trips) and os.path.isfile(zones)):
        pytest.skip("NYC TLC data not configured (SKYPORT_NYC_TRIPS / SKYPORT_NYC_ZONES)")
    return trips, zones
