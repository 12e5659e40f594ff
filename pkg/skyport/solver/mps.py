# File: skyport/solver/mps.py
"""
The full skyport ILP as a PuLP model, exported to MPS:

    min  Σ (β c_ik + α + c_kj) d_ij x_ijk + Σ β c_ij d_ij z_ij
    s.t. Σ_k x_ijk + z_ij = 1          ∀ i, j      (R_i_j)
         x_ijk − y_k ≤ 0               ∀ i, j, k   (O_i_j_k)
         Σ_k y_k = p                               (CARD)
         x, y, z binary

Names exceed the fixed-format 8-character field, so PuLP writes fields
separated by whitespace (free MPS). Via legs with an absent cost are fixed
to 0. A zero-demand pair keeps z_ij free at zero cost whether or not its
direct leg exists, so it never forces a hub open.
"""

from __future__ import annotations

import math
import os
import tempfile

import pulp

from skyport.errors import ExportError
from skyport.models import ProblemInstance, Scenario


def build_ilp(instance: ProblemInstance, scenario: Scenario, name: str = "SKYPORT") -> pulp.LpProblem:
    """LpProblem with binaries x_i_j_k, y_k, z_i_j and rows R_i_j, O_i_j_k, CARD."""
    scenario.check_against(instance)
    oids, aids = instance.origin_ids, instance.airport_ids
    n, m = instance.n_origins, instance.n_airports
    alpha, beta = scenario.alpha, scenario.beta
    ground, aerial, demand = instance.ground_cost, instance.aerial_cost, instance.demand

    for i in range(n):
        for j in range(m):
            if demand[i, j] > 0 and math.isnan(ground[i, n + j]):
                raise ExportError(f"no direct ground cost for demand pair ({oids[i]} → {aids[j]})")

    problem = pulp.LpProblem(name, pulp.LpMinimize)
    y = {k: pulp.LpVariable(f"y_{oids[k]}", 0, 1, pulp.LpInteger) for k in range(n)}
    cost_terms = []

    for i in range(n):
        for j in range(m):
            d = int(demand[i, j])
            c_ij = ground[i, n + j]
            z = pulp.LpVariable(f"z_{oids[i]}_{aids[j]}", 0, 1, pulp.LpInteger)
            if d:
                cost_terms.append(beta * c_ij * d * z)

            via = []
            for k in range(n):
                c_ik, c_kj = ground[i, k], aerial[k, j]
                absent = math.isnan(c_ik) or math.isnan(c_kj)
                x = pulp.LpVariable(f"x_{oids[i]}_{aids[j]}_{oids[k]}", 0, 0 if absent else 1, pulp.LpInteger)
                if d and not absent:
                    cost_terms.append((beta * c_ik + alpha + c_kj) * d * x)
                problem += x - y[k] <= 0, f"O_{oids[i]}_{aids[j]}_{oids[k]}"
                via.append(x)

            problem += pulp.lpSum(via) + z == 1, f"R_{oids[i]}_{aids[j]}"

    problem += pulp.lpSum(y.values()) == scenario.p, "CARD"
    problem += pulp.lpSum(cost_terms), "COST"
    return problem


def export_ilp(instance: ProblemInstance, scenario: Scenario, name: str = "SKYPORT") -> str:
    """Return the ILP as MPS text (original variable and row names kept)."""
    problem = build_ilp(instance, scenario, name)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, f"{name}.mps")
        problem.writeMPS(path, rename=0)
        with open(path, encoding="utf-8") as fh:
            return fh.read()


def count_mps_variables(text: str) -> tuple[int, int]:
    """(integer, continuous) column counts of an MPS document."""
    integer, continuous = set(), set()
    section, in_int = None, False
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("*"):
            continue
        if not raw[0].isspace():
            section = raw.split()[0]
            continue
        if section != "COLUMNS":
            continue
        fields = raw.split()
        if len(fields) >= 3 and fields[1] == "'MARKER'":
            in_int = fields[2] == "'INTORG'"
            continue
        (integer if in_int else continuous).add(fields[0])
    return len(integer), len(continuous - integer)
