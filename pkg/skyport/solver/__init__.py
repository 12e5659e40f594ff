from skyport.models import HubSolution, ProblemInstance, Scenario
from skyport.solver.branch_and_bound import lower_bound, solve_branch_and_bound
from skyport.solver.brute_force import solve_brute_force
from skyport.solver.common import OBJECTIVE_TOL, Method, SolverOptions
from skyport.solver.local_search import solve_local_search
from skyport.solver.mps import build_ilp, count_mps_variables, export_ilp

SOLVERS = {
    Method.BRUTE_FORCE:      solve_brute_force,
    Method.BRANCH_AND_BOUND: solve_branch_and_bound,
    Method.LOCAL_SEARCH:     solve_local_search,
}


def solve(instance: ProblemInstance, scenario: Scenario,
          options: SolverOptions | None = None) -> HubSolution:
    """Dispatch on options.method (branch-and-bound by default)."""
    options = options or SolverOptions()
    return SOLVERS[options.method](instance, scenario, options).with_scenario(scenario)


__all__ = [
    "OBJECTIVE_TOL", "Method", "SOLVERS", "SolverOptions",
    "build_ilp", "count_mps_variables", "export_ilp", "lower_bound", "solve",
    "solve_branch_and_bound", "solve_brute_force", "solve_local_search",
]
