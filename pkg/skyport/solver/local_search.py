# File: skyport/solver/local_search.py

from __future__ import annotations

import logging
import math
import time

import numpy as np

from skyport.allocation import CostModel
from skyport.models import HubSolution, ProblemInstance, Scenario, SolverMeta
from skyport.solver.common import OBJECTIVE_TOL, SolverOptions, greedy_complete, improves

logger = logging.getLogger(__name__)

# Restricted candidate list size for randomised greedy restarts
RCL_SIZE = 3


def swap_descent(model: CostModel, start: tuple[int, ...]) -> tuple[tuple[int, ...], float, int]:
    """
    Best-improvement (k_out, k_in) swaps until none improves by more than the
    tolerance. Returns (hubs, objective, evaluations).
    """
    current = tuple(sorted(start))
    current_obj = model.objective(current)
    evaluations = 1

    while True:
        chosen = set(current)
        best_move, best_obj = None, current_obj - OBJECTIVE_TOL
        for k_out in current:
            for k_in in range(model.n_candidates):
                if k_in in chosen:
                    continue
                cand = tuple(sorted((chosen - {k_out}) | {k_in}))
                obj = model.objective(cand)
                evaluations += 1
                if obj < best_obj or (best_move is not None and obj == best_obj and cand < best_move):
                    best_move, best_obj = cand, obj
        if best_move is None:
            return current, current_obj, evaluations
        current, current_obj = best_move, best_obj


def solve_local_search(instance: ProblemInstance, scenario: Scenario,
                       options: SolverOptions | None = None) -> HubSolution:
    """
    Multi-start heuristic: restart 0 is plain greedy construction, later
    restarts draw each greedy step from the RCL_SIZE best candidates with a
    generator seeded from (seed, restart). Each start is polished by swap descent.
    """
    options = options or SolverOptions()
    scenario.check_against(instance)
    started = time.perf_counter()
    model = CostModel(instance, scenario)
    p = scenario.p

    if p == 0:
        evaluation = model.evaluate(())
        return evaluation.to_solution((), SolverMeta(solver="local-search", heuristic=True,
                                                     wall_time=time.perf_counter() - started))

    best_hubs, best_obj = None, math.inf
    evaluations = 0
    pool = list(range(model.n_candidates))
    for restart in range(options.restarts):
        if restart == 0:
            start = greedy_complete(model, [], pool, p)
        else:
            rng = np.random.default_rng([options.seed, restart])
            start = greedy_complete(model, [], pool, p, rng=rng, rcl=RCL_SIZE)
        hubs, obj, spent = swap_descent(model, start)
        evaluations += spent
        if improves(obj, hubs, best_obj, best_hubs):
            best_hubs, best_obj = hubs, obj

    elapsed = time.perf_counter() - started
    logger.debug(f"local search: {options.restarts} restarts, {evaluations} evaluations, {elapsed:.3f}s")
    evaluation = model.evaluate(best_hubs)
    return evaluation.to_solution(
        model.ids_of(best_hubs),
        SolverMeta(solver="local-search", iterations=evaluations, wall_time=elapsed, heuristic=True),
    )
