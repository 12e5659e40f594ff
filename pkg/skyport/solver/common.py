# File: skyport/solver/common.py

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from skyport.allocation import CostModel
from skyport.errors import ScenarioError

# Absolute tolerance (vehicle-minutes) for incumbent comparisons
OBJECTIVE_TOL = 1e-6


class Method(str, Enum):
    BRUTE_FORCE      = "bf"
    BRANCH_AND_BOUND = "bb"
    LOCAL_SEARCH     = "ls"


@dataclass(frozen=True)
class SolverOptions:
    method:          Method = Method.BRANCH_AND_BOUND
    time_limit:      float = 600.0
    gap_tolerance:   float = 0.0
    seed:            int = 0
    restarts:        int = 10
    enumeration_cap: int = 10**7

    def __post_init__(self):
        try:
            object.__setattr__(self, "method", Method(self.method))
        except ValueError as e:
            raise ScenarioError(str(e)) from None
        if not self.time_limit > 0:
            raise ScenarioError(f"time_limit must be > 0, got {self.time_limit}")
        if self.gap_tolerance < 0:
            raise ScenarioError(f"gap_tolerance must be >= 0, got {self.gap_tolerance}")
        if self.restarts < 1:
            raise ScenarioError(f"restarts must be >= 1, got {self.restarts}")


def improves(objective: float, hubs: tuple[int, ...],
             best_objective: float, best_hubs: tuple[int, ...] | None) -> bool:
    """Strictly better by more than the tolerance, or tied and lexicographically smaller."""
    if best_hubs is None:
        return True
    if objective < best_objective - OBJECTIVE_TOL:
        return True
    if objective <= best_objective + OBJECTIVE_TOL:
        return hubs < best_hubs
    return False


def greedy_complete(model: CostModel, start: Sequence[int], pool: Sequence[int], p: int,
                    rng: np.random.Generator | None = None, rcl: int = 1) -> tuple[int, ...]:
    """
    Grow `start` to p hubs, each step adding the pool candidate with the lowest
    resulting objective. With rng and rcl > 1, the pick is drawn uniformly from
    the rcl best candidates.
    """
    chosen = list(start)
    remaining = [k for k in pool if k not in set(chosen)]
    while len(chosen) < p and remaining:
        scored = sorted((model.objective(sorted(chosen + [k])), k) for k in remaining)
        if rng is not None and rcl > 1:
            pick = scored[int(rng.integers(min(rcl, len(scored))))][1]
        else:
            pick = scored[0][1]
        chosen.append(pick)
        remaining.remove(pick)
    return tuple(sorted(chosen))
