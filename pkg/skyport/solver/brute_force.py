# File: skyport/solver/brute_force.py

from __future__ import annotations

import logging
import math
import time
from itertools import combinations

from skyport.allocation import CostModel
from skyport.errors import EnumerationCapError
from skyport.models import HubSolution, ProblemInstance, Scenario, SolverMeta
from skyport.solver.common import SolverOptions, improves

logger = logging.getLogger(__name__)


def solve_brute_force(instance: ProblemInstance, scenario: Scenario,
                      options: SolverOptions | None = None) -> HubSolution:
    """
    Evaluate every p-subset of candidates; the optimum with the
    lexicographically smallest hub-id set wins.
    """
    options = options or SolverOptions()
    scenario.check_against(instance)
    n, p = instance.n_origins, scenario.p

    subsets = math.comb(n, p)
    if subsets > options.enumeration_cap:
        raise EnumerationCapError(
            f"C({n}, {p}) = {subsets} subsets exceeds the enumeration cap of {options.enumeration_cap}"
        )

    started = time.perf_counter()
    model = CostModel(instance, scenario)
    best_hubs, best_obj = None, math.inf
    for hubs in combinations(range(n), p):
        obj = model.objective(hubs)
        if improves(obj, hubs, best_obj, best_hubs):
            best_hubs, best_obj = hubs, obj

    evaluation = model.evaluate(best_hubs)
    elapsed = time.perf_counter() - started
    logger.debug(f"brute force: {subsets} subsets in {elapsed:.3f}s")
    return evaluation.to_solution(
        model.ids_of(best_hubs),
        SolverMeta(solver="brute-force", iterations=subsets, wall_time=elapsed,
                   proven_optimal=True, gap=0.0),
    )
