# File: skyport/models.py
"""Immutable domain types shared by every module."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Mapping

import numpy as np

from skyport.errors import InvalidInstanceError, ScenarioError


class AllocationMode(str, Enum):
    PER_PAIR          = "per-pair"
    SINGLE_PER_ORIGIN = "single-origin"


class TieBreak(str, Enum):
    DIRECT_THEN_LOWEST_ID = "direct-then-lowest-id"
    HUB_THEN_LOWEST_ID    = "hub-then-lowest-id"


class RouteKind(str, Enum):
    DIRECT  = "DIRECT"
    VIA_HUB = "VIA_HUB"


def _frozen_array(values, dtype=None) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


# ────────────────────────────────────────────────────────────────────
# Zones & instance
# ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Zone:
    id:         int
    name:       str = ""
    lat:        float | None = None
    lon:        float | None = None
    is_airport: bool = False

    def __post_init__(self):
        object.__setattr__(self, "id", int(self.id))
        if self.lat is not None and not -90.0 <= float(self.lat) <= 90.0:
            raise InvalidInstanceError(f"zone {self.id}: latitude {self.lat} outside [-90, 90]")
        if self.lon is not None and not -180.0 <= float(self.lon) <= 180.0:
            raise InvalidInstanceError(f"zone {self.id}: longitude {self.lon} outside [-180, 180]")

    @property
    def has_coordinates(self) -> bool:
        return self.lat is not None and self.lon is not None

    def __repr__(self):
        return f'<Zone {self.id} {self.name!r}{" airport" if self.is_airport else ""}>'


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """
    Candidate origins 𝓛 (N zones), airports 𝓙 and the cost/demand matrices.

    ground_cost is N × (N + |𝓙|): columns are the origins in order, then the
    airports in order. Absent entries are NaN, never zero.
    aerial_cost is N × |𝓙| (hub k → airport j), demand is N × |𝓙|.
    """

    origins:     tuple[Zone, ...]
    airports:    tuple[Zone, ...]
    ground_cost: np.ndarray
    aerial_cost: np.ndarray
    demand:      np.ndarray

    def __post_init__(self):
        origins = tuple(self.origins)
        airports = tuple(self.airports)
        n, m = len(origins), len(airports)

        ground = _frozen_array(self.ground_cost, dtype=float)
        aerial = _frozen_array(self.aerial_cost, dtype=float)
        demand = np.array(self.demand, copy=True)
        if demand.dtype.kind == "f" and np.all(np.isfinite(demand)) and np.all(demand == np.round(demand)):
            demand = demand.astype(np.int64)
        demand.setflags(write=False)

        if ground.shape != (n, n + m):
            raise InvalidInstanceError(f"ground_cost shape {ground.shape} != {(n, n + m)}")
        if aerial.shape != (n, m):
            raise InvalidInstanceError(f"aerial_cost shape {aerial.shape} != {(n, m)}")
        if demand.shape != (n, m):
            raise InvalidInstanceError(f"demand shape {demand.shape} != {(n, m)}")

        object.__setattr__(self, "origins", origins)
        object.__setattr__(self, "airports", airports)
        object.__setattr__(self, "ground_cost", ground)
        object.__setattr__(self, "aerial_cost", aerial)
        object.__setattr__(self, "demand", demand)

    # ─── Shape helpers ───────────────────────────────────────────────
    @property
    def n_origins(self) -> int:
        return len(self.origins)

    @property
    def n_airports(self) -> int:
        return len(self.airports)

    @property
    def origin_ids(self) -> tuple[int, ...]:
        return tuple(z.id for z in self.origins)

    @property
    def airport_ids(self) -> tuple[int, ...]:
        return tuple(z.id for z in self.airports)

    def origin_index(self, zone_id: int) -> int:
        try:
            return self.origin_ids.index(int(zone_id))
        except ValueError:
            raise KeyError(f"zone {zone_id} is not a candidate origin") from None

    def airport_index(self, zone_id: int) -> int:
        try:
            return self.airport_ids.index(int(zone_id))
        except ValueError:
            raise KeyError(f"zone {zone_id} is not an airport") from None

    @property
    def access_cost(self) -> np.ndarray:
        """c_ik: origin → candidate hub ground minutes (N × N view)."""
        return self.ground_cost[:, : self.n_origins]

    @property
    def direct_cost(self) -> np.ndarray:
        """c_ij: origin → airport ground minutes (N × |𝓙| view)."""
        return self.ground_cost[:, self.n_origins:]

    def demand_pairs(self) -> list[tuple[int, int]]:
        """(origin id, airport id) for every pair with d_ij > 0, row-major."""
        rows, cols = np.nonzero(self.demand > 0)
        oids, aids = self.origin_ids, self.airport_ids
        return [(oids[r], aids[c]) for r, c in zip(rows, cols)]

    @property
    def binary_variable_count(self) -> int:
        n, m = self.n_origins, self.n_airports
        return n * n * m + n + n * m

    def __eq__(self, other):
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return (
            self.origins == other.origins
            and self.airports == other.airports
            and np.array_equal(self.ground_cost, other.ground_cost, equal_nan=True)
            and np.array_equal(self.aerial_cost, other.aerial_cost, equal_nan=True)
            and np.array_equal(self.demand, other.demand)
        )

    __hash__ = None

    def __repr__(self):
        return f'<ProblemInstance origins={self.n_origins} airports={list(self.airport_ids)}>'


def validate(instance: ProblemInstance) -> list[str]:
    """
    Report every invariant violation of the instance; empty list iff well-formed.
    Never raises.
    """
    problems: list[str] = []
    oids, aids = instance.origin_ids, instance.airport_ids
    columns = oids + aids

    seen: set[int] = set()
    for zid in columns:
        if zid in seen:
            problems.append(f"duplicate zone id {zid}")
        seen.add(zid)
    if not aids:
        problems.append("no airports")
    for z in instance.origins:
        if z.is_airport:
            problems.append(f"origin zone {z.id} is flagged as an airport")
    for z in instance.airports:
        if not z.is_airport:
            problems.append(f"airport zone {z.id} is not flagged as an airport")

    ground = instance.ground_cost
    for r, c in zip(*np.nonzero(np.isinf(ground))):
        problems.append(f"non-finite ground cost ({oids[r]} → {columns[c]})")
    with np.errstate(invalid="ignore"):
        for r, c in zip(*np.nonzero(ground < 0)):
            problems.append(f"negative ground cost ({oids[r]} → {columns[c]})")
    for i in range(instance.n_origins):
        if ground[i, i] != 0:
            problems.append(f"nonzero diagonal ground cost at zone {oids[i]}")

    aerial = instance.aerial_cost
    for r, c in zip(*np.nonzero(np.isinf(aerial))):
        problems.append(f"non-finite aerial cost ({oids[r]} → {aids[c]})")
    with np.errstate(invalid="ignore"):
        for r, c in zip(*np.nonzero(aerial < 0)):
            problems.append(f"negative aerial cost ({oids[r]} → {aids[c]})")

    demand = np.asarray(instance.demand, dtype=float)
    for r, c in zip(*np.nonzero(~np.isfinite(demand))):
        problems.append(f"non-finite demand ({oids[r]} → {aids[c]})")
    finite = np.where(np.isfinite(demand), demand, 0.0)
    for r, c in zip(*np.nonzero(finite < 0)):
        problems.append(f"negative demand ({oids[r]} → {aids[c]})")
    for r, c in zip(*np.nonzero(finite != np.round(finite))):
        problems.append(f"non-integer demand ({oids[r]} → {aids[c]})")

    direct = instance.direct_cost
    for r, c in zip(*np.nonzero((finite > 0) & np.isnan(direct))):
        problems.append(f"unroutable demand pair ({oids[r]} → {aids[c]})")

    return problems


# ────────────────────────────────────────────────────────────────────
# Scenario
# ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Scenario:
    alpha:           float = 0.0
    beta:            float = 1.0
    p:               int = 0
    allocation_mode: AllocationMode = AllocationMode.PER_PAIR
    tie_break:       TieBreak = TieBreak.DIRECT_THEN_LOWEST_ID

    def __post_init__(self):
        try:
            object.__setattr__(self, "allocation_mode", AllocationMode(self.allocation_mode))
            object.__setattr__(self, "tie_break", TieBreak(self.tie_break))
        except ValueError as e:
            raise ScenarioError(str(e)) from None
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ScenarioError(f"transfer time alpha must be >= 0, got {self.alpha}")
        if not math.isfinite(self.beta) or self.beta < 1:
            raise ScenarioError(f"congestion factor beta must be >= 1, got {self.beta}")
        if int(self.p) != self.p or self.p < 0:
            raise ScenarioError(f"hub count p must be a non-negative integer, got {self.p}")
        object.__setattr__(self, "p", int(self.p))

    def check_against(self, instance: ProblemInstance) -> None:
        if self.p > instance.n_origins:
            raise ScenarioError(f"p={self.p} exceeds the {instance.n_origins} candidate locations")

    def with_p(self, p: int) -> Scenario:
        return Scenario(self.alpha, self.beta, p, self.allocation_mode, self.tie_break)

    @property
    def label(self) -> str:
        return f"a{self.alpha:g}_b{self.beta:g}"


# ────────────────────────────────────────────────────────────────────
# Routes & solutions
# ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Route:
    kind: RouteKind
    cost: float
    hub:  int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RouteKind(self.kind))
        if (self.kind is RouteKind.VIA_HUB) != (self.hub is not None):
            raise InvalidInstanceError("a route carries a hub iff it is VIA_HUB")
        if self.hub is not None:
            object.__setattr__(self, "hub", int(self.hub))
        object.__setattr__(self, "cost", float(self.cost))


@dataclass(frozen=True)
class SolverMeta:
    solver:         str = "evaluate"
    iterations:     int = 0
    wall_time:      float = 0.0
    proven_optimal: bool = False
    gap:            float | None = None
    heuristic:      bool = False
    # scenario the solution was solved under
    alpha:          float | None = None
    beta:           float | None = None
    mode:           str | None = None


@dataclass(frozen=True, eq=False)
class HubSolution:
    hubs:         tuple[int, ...]
    routing:      Mapping[tuple[int, int], Route]
    objective:    float
    direct_count: int
    meta:         SolverMeta = field(default_factory=SolverMeta)

    def __post_init__(self):
        hubs = tuple(sorted(int(h) for h in self.hubs))
        if len(set(hubs)) != len(hubs):
            raise InvalidInstanceError(f"duplicate hubs in {hubs}")
        for pair, route in self.routing.items():
            if route.kind is RouteKind.VIA_HUB and route.hub not in hubs:
                raise InvalidInstanceError(f"pair {pair} routes via closed hub {route.hub}")
        object.__setattr__(self, "hubs", hubs)
        object.__setattr__(self, "routing", MappingProxyType(dict(self.routing)))

    @property
    def p(self) -> int:
        return len(self.hubs)

    @property
    def objective_millions(self) -> float:
        return round(self.objective / 1e6, 2)

    def with_scenario(self, scenario: Scenario) -> HubSolution:
        meta = replace(self.meta, alpha=scenario.alpha, beta=scenario.beta,
                       mode=scenario.allocation_mode.value)
        return replace(self, meta=meta)

    def percent_decrease(self, baseline: float) -> float | None:
        if self.p == 0 or not baseline:
            return None
        return round(100.0 * (baseline - self.objective) / baseline, 2)

    def recompute_objective(self, instance: ProblemInstance) -> float:
        terms = []
        for (i, j), route in self.routing.items():
            d = instance.demand[instance.origin_index(i), instance.airport_index(j)]
            terms.append(float(d) * route.cost)
        return math.fsum(terms)

    def __eq__(self, other):
        if not isinstance(other, HubSolution):
            return NotImplemented
        return (
            self.hubs == other.hubs
            and dict(self.routing) == dict(other.routing)
            and self.objective == other.objective
            and self.direct_count == other.direct_count
        )

    __hash__ = None

    def __repr__(self):
        return f'<HubSolution hubs={list(self.hubs)} objective={self.objective:.2f} direct={self.direct_count}>'
