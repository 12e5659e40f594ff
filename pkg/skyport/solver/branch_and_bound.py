# File: skyport/solver/branch_and_bound.py
"""
Exact p-subset search by inclusion/exclusion branching.

Candidates are branched on in order of single-hub savings. A node fixes a
committed set S and leaves the suffix A of the order free; its bound is the
larger of
  - the per-pair objective with every hub in S ∪ A open (cardinality relaxed), and
  - objective(S) minus the r = p − |S| largest single-hub savings over S
    (savings of a hub set never exceed the sum of its members' savings).
Both are admissible for either allocation mode.
"""

from __future__ import annotations

import logging
import math
import time
from typing import Sequence

import numpy as np

from skyport.allocation import CostModel
from skyport.models import HubSolution, ProblemInstance, Scenario, SolverMeta
from skyport.solver.common import OBJECTIVE_TOL, SolverOptions, greedy_complete, improves

logger = logging.getLogger(__name__)

# Nodes between wall-clock checks
_CLOCK_EVERY = 256


def lower_bound(model: CostModel, committed: Sequence[int], free: Sequence[int], r: int) -> float:
    """Admissible bound on every completion of `committed` with r more hubs from `free`."""
    relaxed = model.relaxed_objective(sorted(set(committed) | set(free)))
    if r <= 0 or not free:
        return relaxed

    current = model.per_pair_costs(list(committed))
    if not np.all(np.isfinite(current)):
        return relaxed
    gains = model.demand[:, None] * np.maximum(current[:, None] - model.via[:, list(free)], 0.0)
    per_hub = np.sort(gains.sum(axis=0))[::-1]
    marginal = float(np.dot(model.demand, current)) - float(per_hub[:r].sum())
    return max(relaxed, marginal)


def savings_order(model: CostModel) -> list[int]:
    """Candidate indices by decreasing single-hub saving (ties → lower id)."""
    singles = [model.objective((k,)) for k in range(model.n_candidates)]
    return sorted(range(model.n_candidates), key=lambda k: (singles[k], k))


def solve_branch_and_bound(instance: ProblemInstance, scenario: Scenario,
                           options: SolverOptions | None = None) -> HubSolution:
    options = options or SolverOptions()
    scenario.check_against(instance)
    n, p = instance.n_origins, scenario.p
    started = time.perf_counter()
    model = CostModel(instance, scenario)

    if p == 0 or p == n:
        hubs = tuple(range(p))
        evaluation = model.evaluate(hubs)
        return evaluation.to_solution(
            model.ids_of(hubs),
            SolverMeta(solver="branch-and-bound", iterations=1,
                       wall_time=time.perf_counter() - started, proven_optimal=True, gap=0.0),
        )

    order = savings_order(model)
    best_hubs, best_obj = None, math.inf

    def offer(hubs: tuple[int, ...]):
        nonlocal best_hubs, best_obj
        obj = model.objective(hubs)
        if improves(obj, hubs, best_obj, best_hubs):
            best_hubs, best_obj = hubs, obj

    # ─── Incumbents: greedy completion and the lexicographically first set
    offer(greedy_complete(model, [], order, p))
    offer(tuple(range(p)))

    deadline = started + options.time_limit
    stack: list[tuple[int, tuple[int, ...], float]] = [(0, (), -math.inf)]
    nodes = 0
    timed_out = False
    gap_floor = math.inf

    while stack:
        if nodes % _CLOCK_EVERY == 0 and time.perf_counter() > deadline:
            timed_out = True
            break
        pos, committed, _ = stack.pop()
        nodes += 1
        free = order[pos:]
        r = p - len(committed)

        if r == 0 or r == len(free):
            offer(tuple(sorted(committed + (tuple(free) if r else ()))))
            continue

        bound = lower_bound(model, committed, free, r)
        lexmin = tuple(sorted(committed + tuple(sorted(free)[:r])))
        offer(lexmin)

        if bound > best_obj + OBJECTIVE_TOL:
            continue
        if bound >= best_obj - OBJECTIVE_TOL and lexmin >= best_hubs:
            continue
        if options.gap_tolerance > 0 and bound >= best_obj - options.gap_tolerance * abs(best_obj):
            gap_floor = min(gap_floor, bound)
            continue

        nxt = order[pos]
        if len(free) - 1 >= r:
            stack.append((pos + 1, committed, bound))
        stack.append((pos + 1, tuple(sorted(committed + (nxt,))), bound))

    if timed_out:
        gap_floor = min([gap_floor] + [b for _, _, b in stack])
        logger.warning(f"branch-and-bound: time limit {options.time_limit}s hit after {nodes} nodes")

    gap = 0.0
    if math.isfinite(gap_floor) and math.isfinite(best_obj) and best_obj > 0:
        gap = max(0.0, (best_obj - gap_floor) / best_obj)
    elif timed_out:
        gap = math.inf if not math.isfinite(gap_floor) else gap

    elapsed = time.perf_counter() - started
    evaluation = model.evaluate(best_hubs)
    logger.debug(f"branch-and-bound: {nodes} nodes, objective {best_obj:.3f}, {elapsed:.3f}s")
    return evaluation.to_solution(
        model.ids_of(best_hubs),
        SolverMeta(
            solver="branch-and-bound",
            iterations=nodes,
            wall_time=elapsed,
            proven_optimal=not timed_out and gap_floor == math.inf,
            gap=None if math.isinf(gap) else gap,
        ),
    )
