"""Exact centralized solver used to certify the distributed algorithm.

The worst-case transaction cost is a pointwise maximum over finitely many
candidate outcomes, so the full scheduling problem becomes a convex QP after
an epigraph reformulation: one epigraph variable per sub-horizon (their inner
maximizations are independent and the block costs add), with one constraint
per candidate of that block.  The model is solved with cvxpy; this path
exists to test the distributed solver, not to replace it, and it shares no
solver code with it.
"""

from __future__ import annotations

from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from .scenario import Scenario
from .subproblems import Schedule
from .transaction import PriceTransform, WorstCaseSets

VARIABLE_GUARD = 200_000


class OracleSizeError(RuntimeError):
    pass


class OracleSolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleSolution:
    schedule: Schedule
    objective: float
    solver: str


def centralized_solve(scenario: Scenario, sets: WorstCaseSets, tol: float = 1e-8) -> OracleSolution:
    """Solve the full scheduling problem exactly over the candidate vertex set."""
    aux = sum(b.totals.shape[0] * b.slots.size for b in sets.blocks)
    if aux > VARIABLE_GUARD:
        raise OracleSizeError(
            f"epigraph needs {aux} auxiliary terms (> {VARIABLE_GUARD}); "
            "reduce the vertex count (aggregated evaluation mode) or the horizon"
        )

    T = scenario.T
    M, N, Q, J = (len(scenario.generators), len(scenario.class1), len(scenario.class2), len(scenario.storage))
    prices = PriceTransform.from_market(scenario.market)
    mk = scenario.market

    p_r = cp.Variable(T, name="p_r")
    p_tilde = cp.Variable(T, name="p_tilde")
    cons = [p_r >= mk.p_r_min, p_r <= mk.p_r_max]
    objective = 0

    supply = p_r
    demand = np.asarray(mk.fixed_load, dtype=float)

    if M:
        p_g = cp.Variable((M, T), name="p_g")
        for m, gen in enumerate(scenario.generators):
            cons += [p_g[m] >= gen.p_min, p_g[m] <= gen.p_max]
            if T > 1:
                cons += [
                    cp.diff(p_g[m]) <= gen.ramp_up,
                    cp.diff(p_g[m]) >= -gen.ramp_down,
                ]
            if gen.initial_output is not None:
                cons += [
                    p_g[m][0] <= gen.initial_output + gen.ramp_up,
                    p_g[m][0] >= gen.initial_output - gen.ramp_down,
                ]
            objective = objective + gen.cost_a * cp.sum_squares(p_g[m]) + gen.cost_b * cp.sum(p_g[m])
        cap = sum(g.p_max for g in scenario.generators)
        cons.append(cp.sum(p_g, axis=0) <= cap - np.asarray(mk.spinning_reserve, dtype=float))
        supply = supply + cp.sum(p_g, axis=0)

    if N:
        p_d = cp.Variable((N, T), name="p_d")
        for n, load in enumerate(scenario.class1):
            cons += [p_d[n] >= load.p_min, p_d[n] <= load.p_max]
            objective = objective - (load.util_c * cp.sum_squares(p_d[n]) + load.util_d * cp.sum(p_d[n]))
        demand = demand + cp.sum(p_d, axis=0)

    if Q:
        p_e = cp.Variable((Q, T), name="p_e")
        for q, load in enumerate(scenario.class2):
            cons += [p_e[q] >= 0, p_e[q] <= load.p_max_per_slot, cp.sum(p_e[q]) == load.energy_total]
            objective = objective - load.util_weights @ p_e[q]
        demand = demand + cp.sum(p_e, axis=0)

    link = p_r
    if J:
        p_b = cp.Variable((J, T), name="p_b")
        for j, unit in enumerate(scenario.storage):
            stored = unit.b_initial + cp.cumsum(p_b[j])
            cons += [
                p_b[j] >= unit.p_chg_min,
                p_b[j] <= unit.p_chg_max,
                stored >= 0,
                stored <= unit.b_max,
                stored[T - 1] >= unit.b_min_final,
                p_b[j][0] >= -unit.efficiency * unit.b_initial,
            ]
            if T > 1:
                cons.append(p_b[j][1:] >= -unit.efficiency * (unit.b_initial + cp.cumsum(p_b[j])[:-1]))
            floor = (1.0 - unit.dod) * unit.b_max
            objective = objective + unit.cost_weights @ (floor - stored)
        link = link + cp.sum(p_b, axis=0)

    cons.append(supply == demand)
    cons.append(p_tilde == link)

    for b in sets.blocks:
        r = cp.Variable(name=f"r_{b.slots[0]}")
        diff = cp.reshape(p_tilde[b.slots], (1, b.slots.size), order="C") - b.totals
        cons.append(
            cp.abs(diff) @ prices.half_spread[b.slots] + diff @ prices.mid_price[b.slots] <= r
        )
        objective = objective + r

    problem = cp.Problem(cp.Minimize(objective), cons)
    solver_used = "CLARABEL"
    try:
        problem.solve(
            solver=cp.CLARABEL,
            tol_gap_abs=tol,
            tol_gap_rel=tol,
            tol_feas=tol,
            max_iter=200_000,
        )
    except (cp.SolverError, Exception):  # pragma: no cover - fallback path
        solver_used = "CVXOPT"
        problem.solve(solver=cp.CVXOPT)
    if problem.status not in ("optimal", "optimal_inaccurate"):
        raise OracleSolveError(f"centralized solve failed with status {problem.status}")

    schedule = Schedule.zeros(scenario)
    if M:
        schedule.p_g = np.asarray(p_g.value, dtype=float).reshape(M, T)
    if N:
        schedule.p_d = np.asarray(p_d.value, dtype=float).reshape(N, T)
    if Q:
        schedule.p_e = np.clip(np.asarray(p_e.value, dtype=float).reshape(Q, T), 0.0, None)
    if J:
        schedule.p_b = np.asarray(p_b.value, dtype=float).reshape(J, T)
        for j, unit in enumerate(scenario.storage):
            schedule.b[j] = unit.b_initial + np.cumsum(schedule.p_b[j])
    schedule.p_r = np.asarray(p_r.value, dtype=float).ravel()
    schedule.p_tilde_r = np.asarray(p_tilde.value, dtype=float).ravel()
    return OracleSolution(schedule=schedule, objective=float(problem.value), solver=solver_used)


@dataclass(frozen=True)
class CertifyReport:
    objective_distributed: float
    objective_oracle: float
    relative_gap: float
    max_slot_deviation: dict
    passed: bool

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"certify: {verdict} distributed={self.objective_distributed:.6g} "
            f"oracle={self.objective_oracle:.6g} relative gap={self.relative_gap:.3e}"
        )


def certify(
    scenario: Scenario,
    sets: WorstCaseSets,
    distributed: Schedule,
    oracle_solution: OracleSolution,
    rel_tol: float = 1e-2,
) -> CertifyReport:
    """Compare a (feasible) distributed schedule against the exact optimum."""
    from .coordinator import evaluate_net_cost  # deferred: coordinator does not import back

    dist_cost = evaluate_net_cost(scenario, distributed, sets).total
    ref = oracle_solution.objective
    gap = (dist_cost - ref) / max(1.0, abs(ref))
    dev = {
        "p_g": float(np.max(np.abs(distributed.p_g.sum(axis=0) - oracle_solution.schedule.p_g.sum(axis=0)), initial=0.0)),
        "p_d": float(np.max(np.abs(distributed.p_d.sum(axis=0) - oracle_solution.schedule.p_d.sum(axis=0)), initial=0.0)),
        "p_e": float(np.max(np.abs(distributed.p_e.sum(axis=0) - oracle_solution.schedule.p_e.sum(axis=0)), initial=0.0)),
        "p_tilde_r": float(np.max(np.abs(distributed.p_tilde_r - oracle_solution.schedule.p_tilde_r), initial=0.0)),
    }
    return CertifyReport(
        objective_distributed=float(dist_cost),
        objective_oracle=float(ref),
        relative_gap=float(gap),
        max_slot_deviation=dev,
        passed=bool(gap <= rel_tol),
    )
