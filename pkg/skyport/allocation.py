# File: skyport/allocation.py
"""
Routing of every demand pair for a fixed hub set, and the exact objective

    Σ (β c_ik + α + c_kj) d_ij x_ijk + Σ β c_ij d_ij z_ij

Every solver evaluates hub sets through CostModel; the public operations
(via_hub_cost, best_route, evaluate_hub_set) are thin views over it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from skyport.errors import UnroutablePairError
from skyport.models import (
    AllocationMode, HubSolution, ProblemInstance, Route, RouteKind,
    Scenario, SolverMeta, TieBreak,
)

# Marker for a via-hub leg with an absent cost entry; never wins a minimum.
UNROUTABLE = math.inf


@dataclass(frozen=True)
class Evaluation:
    objective:     float
    routing:       Mapping[tuple[int, int], Route]
    direct_count:  int
    per_hub_load:  Mapping[int, int] = field(default_factory=dict)

    def to_solution(self, hubs: Iterable[int], meta: SolverMeta | None = None) -> HubSolution:
        return HubSolution(
            hubs=tuple(hubs),
            routing=self.routing,
            objective=self.objective,
            direct_count=self.direct_count,
            meta=meta or SolverMeta(),
        )


class CostModel:
    """
    Per-pair cost arrays for one (instance, scenario).

    Candidate hubs are re-indexed in ascending zone-id order, so model index
    order equals hub-id order: argmin picks the lowest id and sorted index
    tuples compare like sorted id tuples.
    Only pairs with d_ij > 0 are kept (P of them).
    """

    def __init__(self, instance: ProblemInstance, scenario: Scenario):
        self.instance = instance
        self.scenario = scenario
        n = instance.n_origins

        order = np.argsort(np.asarray(instance.origin_ids), kind="stable")
        self.hub_ids: tuple[int, ...] = tuple(instance.origin_ids[k] for k in order)
        self.n_candidates = n

        demand = np.asarray(instance.demand)
        rows, cols = np.nonzero(demand > 0)
        self.pair_origin = rows
        self.pair_airport = cols
        self.pair_ids: list[tuple[int, int]] = [
            (instance.origin_ids[r], instance.airport_ids[c]) for r, c in zip(rows, cols)
        ]
        self.demand = demand[rows, cols]

        beta, alpha = scenario.beta, scenario.alpha
        direct = beta * instance.direct_cost[rows, cols]
        access = instance.access_cost[rows][:, order]               # c_ik, P × N
        aerial = instance.aerial_cost[order][:, cols].T             # c_kj, P × N
        via = beta * access + alpha + aerial

        self.direct = np.where(np.isnan(direct), UNROUTABLE, direct)
        self.via = np.where(np.isnan(via), UNROUTABLE, via)
        self.hub_first = scenario.tie_break is TieBreak.HUB_THEN_LOWEST_ID
        self.single = scenario.allocation_mode is AllocationMode.SINGLE_PER_ORIGIN

        # origin row → compact index among origins that carry demand
        _, self.pair_group = np.unique(rows, return_inverse=True)
        self.n_groups = int(self.pair_group.max()) + 1 if len(rows) else 0

    # ─── Hub index helpers ───────────────────────────────────────────
    def indices_of(self, hub_ids: Iterable[int]) -> tuple[int, ...]:
        lookup = {h: k for k, h in enumerate(self.hub_ids)}
        try:
            return tuple(sorted(lookup[int(h)] for h in hub_ids))
        except KeyError as e:
            raise KeyError(f"zone {e.args[0]} is not a candidate hub") from None

    def ids_of(self, indices: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.hub_ids[k] for k in sorted(indices))

    # ─── Per-pair costs ──────────────────────────────────────────────
    def per_pair_costs(self, hubs: Sequence[int]) -> np.ndarray:
        """min(direct, min_{k ∈ hubs} via) per pair, ignoring the allocation mode."""
        if len(hubs) == 0:
            return self.direct.copy()
        return np.minimum(self.direct, self.via[:, list(hubs)].min(axis=1))

    def _single_choice(self, hubs: Sequence[int]) -> np.ndarray:
        """Per pair, the model index of its origin's single allocated hub."""
        hubs = sorted(hubs)
        options = np.minimum(self.direct[:, None], self.via[:, hubs])   # P × |H|
        weighted = self.demand[:, None] * options
        scores = np.zeros((self.n_groups, len(hubs)))
        np.add.at(scores, self.pair_group, weighted)
        chosen = np.asarray(hubs)[np.argmin(scores, axis=1)]
        return chosen[self.pair_group]

    def pair_costs(self, hubs: Sequence[int]) -> np.ndarray:
        """Per-pair routed cost under the scenario's allocation mode."""
        if len(hubs) == 0 or not self.single:
            return self.per_pair_costs(hubs)
        chosen = self._single_choice(hubs)
        via = self.via[np.arange(len(chosen)), chosen]
        return np.minimum(self.direct, via)

    def objective(self, hubs: Sequence[int]) -> float:
        """Exact (correctly rounded) Σ d_ij · cost_ij for the hub index set."""
        costs = self.pair_costs(hubs)
        if not np.all(np.isfinite(costs)):
            return math.inf
        return math.fsum((self.demand * costs).tolist())

    def relaxed_objective(self, hubs: Sequence[int]) -> float:
        """Per-pair objective; a lower bound for any mode over the same hubs."""
        costs = self.per_pair_costs(hubs)
        if not np.all(np.isfinite(costs)):
            return math.inf
        return math.fsum((self.demand * costs).tolist())

    # ─── Full routing ────────────────────────────────────────────────
    def evaluate(self, hubs: Sequence[int]) -> Evaluation:
        hubs = sorted(hubs)
        n_pairs = len(self.demand)
        if not hubs:
            via_cost = np.full(n_pairs, UNROUTABLE)
            via_hub = np.full(n_pairs, -1)
        elif self.single:
            via_hub = self._single_choice(hubs)
            via_cost = self.via[np.arange(n_pairs), via_hub]
        else:
            sub = self.via[:, hubs]
            pick = np.argmin(sub, axis=1)
            via_hub = np.asarray(hubs)[pick]
            via_cost = sub[np.arange(n_pairs), pick]

        if self.hub_first:
            use_hub = via_cost <= self.direct
        else:
            use_hub = via_cost < self.direct
        use_hub &= np.isfinite(via_cost)

        routing: dict[tuple[int, int], Route] = {}
        load: dict[int, int] = {self.hub_ids[k]: 0 for k in hubs}
        terms = []
        direct_count = 0
        for q, pair in enumerate(self.pair_ids):
            if use_hub[q]:
                hub_id = self.hub_ids[int(via_hub[q])]
                route = Route(RouteKind.VIA_HUB, float(via_cost[q]), hub_id)
                load[hub_id] += int(self.demand[q])
            else:
                if not math.isfinite(self.direct[q]):
                    raise UnroutablePairError(*pair)
                route = Route(RouteKind.DIRECT, float(self.direct[q]))
                direct_count += 1
            routing[pair] = route
            terms.append(float(self.demand[q]) * route.cost)

        return Evaluation(
            objective=math.fsum(terms),
            routing=MappingProxyType(routing),
            direct_count=direct_count,
            per_hub_load=MappingProxyType(load),
        )


# ────────────────────────────────────────────────────────────────────
# Public operations
# ────────────────────────────────────────────────────────────────────

def via_hub_cost(i: int, j: int, k: int, scenario: Scenario, instance: ProblemInstance) -> float:
    """β·c_ik + α + c_kj in minutes, or UNROUTABLE when a leg is absent."""
    oi, aj, hk = instance.origin_index(i), instance.airport_index(j), instance.origin_index(k)
    c_ik = instance.access_cost[oi, hk]
    c_kj = instance.aerial_cost[hk, aj]
    if math.isnan(c_ik) or math.isnan(c_kj):
        return UNROUTABLE
    return float(scenario.beta * c_ik + scenario.alpha + c_kj)


def direct_route_cost(i: int, j: int, scenario: Scenario, instance: ProblemInstance) -> float:
    c_ij = instance.direct_cost[instance.origin_index(i), instance.airport_index(j)]
    if math.isnan(c_ij):
        return UNROUTABLE
    return float(scenario.beta * c_ij)


def best_route(i: int, j: int, hubs: Iterable[int], scenario: Scenario,
               instance: ProblemInstance) -> Route:
    """
    Cheapest of DIRECT and every open hub for one pair.
    Ties follow scenario.tie_break (default: DIRECT, then lowest hub id).
    """
    direct = direct_route_cost(i, j, scenario, instance)
    best_hub, best_cost = None, UNROUTABLE
    for k in sorted(int(h) for h in hubs):
        cost = via_hub_cost(i, j, k, scenario, instance)
        if cost < best_cost:
            best_hub, best_cost = k, cost

    if best_hub is not None:
        if best_cost < direct or (scenario.tie_break is TieBreak.HUB_THEN_LOWEST_ID and best_cost <= direct):
            return Route(RouteKind.VIA_HUB, best_cost, best_hub)
    if math.isinf(direct):
        raise UnroutablePairError(i, j)
    return Route(RouteKind.DIRECT, direct)


def evaluate_hub_set(hubs: Iterable[int], scenario: Scenario, instance: ProblemInstance,
                     model: CostModel | None = None) -> Evaluation:
    """Optimal routing of every positive-demand pair through the given hub ids."""
    model = model or CostModel(instance, scenario)
    return model.evaluate(model.indices_of(hubs))
