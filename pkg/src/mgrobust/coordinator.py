"""Dual-decomposition coordinator: multiplier updates, primal averaging, reporting.

One iteration broadcasts the current multipliers, lets every local controller
solve its subproblem, collects only the aggregate quantities a real deployment
would upload (per-slot sums plus the two grid-side profiles), forms the dual
subgradients from those aggregates, and takes a projected subgradient step
with a constant stepsize.  Running averages of the primal iterates recover an
implementable schedule; the reported schedule shifts the committed grid draw
within its box to restore exact balance, which also yields a certified
duality-gap estimate.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .numerics import BundleParams
from .scenario import Scenario, ScenarioValidationError, validate_scenario
from .subproblems import Multipliers, Schedule, solve_all
from .transaction import PriceTransform, WorstCaseResult, WorstCaseSets, worst_case_cost, worst_case_sets

SCHEDULE_FIELDS = ("p_g", "p_d", "p_e", "p_b", "b", "p_r", "p_tilde_r")


@dataclass(frozen=True)
class RunParams:
    stepsize: float | None = None  # None picks the price/load-normalized default
    max_iters: int = 3000
    tol_residual: float = 1e-2
    tol_gap: float = 1e-2
    gap_interval: int = 50
    evaluation_mode: str = "auto"  # candidate set mode for the worst-case cost
    bundle_tol_eta: float = 1e-5
    bundle_max_iter: int = 120
    bundle_rho0: float = 1.0
    record_every: int = 1

    def bundle_params(self) -> BundleParams:
        return BundleParams(rho0=self.bundle_rho0, tol_eta=self.bundle_tol_eta, max_iter=self.bundle_max_iter)


def default_stepsize(scenario: Scenario) -> float:
    """Constant stepsize normalized by the price and load scale of the instance.

    Multiplier magnitudes scale with prices while subgradient magnitudes scale
    with power, so the stepsize grows with the price scale and shrinks with
    the square of the power scale; one default then works across price
    regimes that differ by orders of magnitude.
    """
    price_scale = float(np.max(scenario.market.purchase_price))
    load_scale = max(1.0, float(np.max(np.abs(scenario.market.fixed_load), initial=0.0)))
    return 0.5 * price_scale / load_scale**2


@dataclass(frozen=True)
class AggregateMessage:
    """The only quantities local controllers upload to the coordinator."""

    sum_p_g: np.ndarray
    sum_p_d: np.ndarray
    sum_p_e: np.ndarray
    sum_p_b: np.ndarray
    p_r: np.ndarray
    p_tilde_r: np.ndarray

    @classmethod
    def from_schedule(cls, x: Schedule) -> "AggregateMessage":
        return cls(
            sum_p_g=x.p_g.sum(axis=0),
            sum_p_d=x.p_d.sum(axis=0),
            sum_p_e=x.p_e.sum(axis=0),
            sum_p_b=x.p_b.sum(axis=0),
            p_r=x.p_r.copy(),
            p_tilde_r=x.p_tilde_r.copy(),
        )


def compute_subgradients(scenario: Scenario, msg: AggregateMessage):
    """Dual subgradients of the three relaxed constraint families."""
    cap = scenario.total_gen_capacity
    g_mu = scenario.market.spinning_reserve - (cap - msg.sum_p_g)
    g_lam = scenario.market.fixed_load + msg.sum_p_d + msg.sum_p_e - msg.sum_p_g - msg.p_r
    g_nu = msg.p_r + msg.sum_p_b - msg.p_tilde_r
    return g_mu, g_lam, g_nu


def dual_step(z: Multipliers, g, stepsize: float) -> Multipliers:
    """Projected subgradient ascent on the dual: mu stays nonnegative."""
    g_mu, g_lam, g_nu = g
    return Multipliers(
        mu=np.maximum(z.mu + stepsize * g_mu, 0.0),
        lam=z.lam + stepsize * g_lam,
        nu=z.nu + stepsize * g_nu,
    )


def primal_average(average: Schedule | None, iterate: Schedule, count: int) -> Schedule:
    """Running mean over the first `count` iterates; storage levels are rebuilt
    from the averaged charging powers so the dynamics stay exact."""
    if average is None or count == 1:
        return iterate.copy()
    out = average.copy()
    w = 1.0 / count
    for name in SCHEDULE_FIELDS:
        arr = getattr(out, name)
        arr += w * (getattr(iterate, name) - arr)
    return out


def _rebuild_storage(scenario: Scenario, x: Schedule) -> None:
    for j, unit in enumerate(scenario.storage):
        x.b[j] = unit.b_initial + np.cumsum(x.p_b[j])


@dataclass(frozen=True)
class IterationRecord:
    k: int
    multipliers: Multipliers
    g_mu: np.ndarray
    g_lam: np.ndarray
    g_nu: np.ndarray
    residual_mu: float
    residual_lam: float
    residual_nu: float
    dual_value: float
    best_dual: float
    gap: float | None
    averaged: Schedule


@dataclass(frozen=True)
class CostBreakdown:
    total: float
    generation: float
    class1_utility: float
    class2_utility: float
    storage: float
    transaction_worst: float
    worst: WorstCaseResult


class InfeasibleScheduleError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("schedule infeasible: " + "; ".join(self.violations))


def check_schedule(scenario: Scenario, x: Schedule, tol: float = 1e-6) -> list[str]:
    """All constraint violations of a schedule beyond `tol`, as messages."""
    out: list[str] = []
    T = scenario.T

    def box(name, arr, lo, hi):
        if np.any(arr < lo - tol) or np.any(arr > hi + tol):
            out.append(f"{name} leaves its box")

    for m, gen in enumerate(scenario.generators):
        box(f"p_g[{m + 1}]", x.p_g[m], gen.p_min, gen.p_max)
        if T > 1:
            d = np.diff(x.p_g[m])
            if np.any(d > gen.ramp_up + tol) or np.any(-d > gen.ramp_down + tol):
                out.append(f"p_g[{m + 1}] violates ramp limits")
        if gen.initial_output is not None:
            if x.p_g[m][0] > gen.initial_output + gen.ramp_up + tol or x.p_g[m][0] < gen.initial_output - gen.ramp_down - tol:
                out.append(f"p_g[{m + 1}] violates the initial ramp")
    headroom = scenario.total_gen_capacity - x.p_g.sum(axis=0)
    if np.any(headroom < scenario.market.spinning_reserve - tol):
        out.append("spinning reserve violated")
    for n, load in enumerate(scenario.class1):
        box(f"p_d[{n + 1}]", x.p_d[n], load.p_min, load.p_max)
    for q, load in enumerate(scenario.class2):
        box(f"p_e[{q + 1}]", x.p_e[q], 0.0, load.p_max_per_slot)
        if abs(float(x.p_e[q].sum()) - load.energy_total) > max(tol, 1e-9):
            out.append(f"p_e[{q + 1}] misses its energy requirement")
    for j, unit in enumerate(scenario.storage):
        box(f"p_b[{j + 1}]", x.p_b[j], unit.p_chg_min, unit.p_chg_max)
        b = unit.b_initial + np.cumsum(x.p_b[j])
        if np.max(np.abs(b - x.b[j]), initial=0.0) > tol:
            out.append(f"b[{j + 1}] inconsistent with its charging profile")
        box(f"b[{j + 1}]", b, 0.0, unit.b_max)
        if b[-1] < unit.b_min_final - tol:
            out.append(f"b[{j + 1}] ends below its required final level")
        prev = np.concatenate([[unit.b_initial], b[:-1]])
        if np.any(x.p_b[j] < -unit.efficiency * prev - tol):
            out.append(f"p_b[{j + 1}] discharges beyond the usable stored energy")
    box("p_r", x.p_r, scenario.market.p_r_min, scenario.market.p_r_max)
    balance = scenario.market.fixed_load + x.p_d.sum(axis=0) + x.p_e.sum(axis=0) - x.p_g.sum(axis=0) - x.p_r
    if np.max(np.abs(balance), initial=0.0) > tol:
        out.append(f"balance violated by up to {np.max(np.abs(balance)):.3g} kW")
    link = x.p_r + x.p_b.sum(axis=0) - x.p_tilde_r
    if np.max(np.abs(link), initial=0.0) > tol:
        out.append(f"committed-injection link violated by up to {np.max(np.abs(link)):.3g} kW")
    return out


def evaluate_net_cost(
    scenario: Scenario,
    x: Schedule,
    sets: WorstCaseSets,
    feas_tol: float = 1e-6,
    check: bool = True,
) -> CostBreakdown:
    """Net cost of a feasible schedule, component by component (cents)."""
    if check:
        violations = check_schedule(scenario, x, feas_tol)
        if violations:
            raise InfeasibleScheduleError(violations)
    prices = PriceTransform.from_market(scenario.market)
    generation = sum(gen.cost(x.p_g[m]) for m, gen in enumerate(scenario.generators))
    class1 = sum(load.utility(x.p_d[n]) for n, load in enumerate(scenario.class1))
    class2 = sum(load.utility(x.p_e[q]) for q, load in enumerate(scenario.class2))
    storage = sum(unit.cost(x.b[j]) for j, unit in enumerate(scenario.storage))
    worst = worst_case_cost(x.p_tilde_r, sets, prices)
    total = generation - class1 - class2 + storage + worst.cost
    return CostBreakdown(
        total=float(total),
        generation=float(generation),
        class1_utility=float(class1),
        class2_utility=float(class2),
        storage=float(storage),
        transaction_worst=float(worst.cost),
        worst=worst,
    )


def project_to_balance(scenario: Scenario, x: Schedule) -> Schedule:
    """Shift the committed grid draw inside its box to restore exact balance,
    then rebuild the dependent profiles so the coupling holds exactly."""
    out = x.copy()
    needed = scenario.market.fixed_load + out.p_d.sum(axis=0) + out.p_e.sum(axis=0) - out.p_g.sum(axis=0)
    out.p_r = np.clip(needed, scenario.market.p_r_min, scenario.market.p_r_max)
    out.p_tilde_r = out.p_r + out.p_b.sum(axis=0)
    _rebuild_storage(scenario, out)
    return out


def _residuals(scenario: Scenario, x: Schedule) -> tuple[float, float, float]:
    msg = AggregateMessage.from_schedule(x)
    g_mu, g_lam, g_nu = compute_subgradients(scenario, msg)
    return (
        float(np.max(np.maximum(g_mu, 0.0), initial=0.0)),
        float(np.max(np.abs(g_lam), initial=0.0)),
        float(np.max(np.abs(g_nu), initial=0.0)),
    )


@dataclass(frozen=True)
class RunResult:
    schedule: Schedule  # balance-projected averaged schedule (feasible); the deliverable
    schedule_averaged: Schedule  # raw running average of the iterates
    multipliers: Multipliers
    records: list[IterationRecord]
    converged: bool
    iterations: int
    stepsize: float
    best_dual: float
    primal_cost: CostBreakdown
    gap: float
    residuals_averaged: tuple[float, float, float]
    residuals_delivered: tuple[float, float, float]
    runtime: float
    worst_case: WorstCaseResult


def run(scenario: Scenario, params: RunParams = RunParams(), sets: WorstCaseSets | None = None) -> RunResult:
    """Execute the distributed scheduling loop until the stopping rule fires.

    Stops once the delivered (balance-projected averaged) schedule has
    constraint residuals below tol_residual and a certified duality-gap
    estimate below tol_gap, or after max_iters.  The raw averaged-iterate
    residuals are logged per iteration for diagnostics; with a constant
    stepsize they decay only like (multiplier travel)/(stepsize * k), so the
    delivered schedule is the meaningful feasibility target.
    Non-convergence is reported in the result, not raised.
    """
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioValidationError(violations)
    t0 = time.perf_counter()
    prices = PriceTransform.from_market(scenario.market)
    if sets is None:
        sets = worst_case_sets(scenario.uncertainty, params.evaluation_mode)
    stepsize = params.stepsize if params.stepsize is not None else default_stepsize(scenario)
    bundle_params = params.bundle_params()

    T = scenario.T
    cap = scenario.total_gen_capacity
    dual_const_base = -cap  # per-slot constant multiplying mu, plus SR
    z = Multipliers.zeros(T)
    average: Schedule | None = None
    records: list[IterationRecord] = []
    best_dual = -np.inf
    gap = np.inf
    converged = False
    k = 0

    for k in range(params.max_iters):
        iterate, value_sum, _ = solve_all(scenario, prices, sets, z, bundle_params)
        dual_value = value_sum + float(
            z.mu @ (scenario.market.spinning_reserve + dual_const_base) + z.lam @ scenario.market.fixed_load
        )
        best_dual = max(best_dual, dual_value)

        msg = AggregateMessage.from_schedule(iterate)
        g = compute_subgradients(scenario, msg)
        average = primal_average(average, iterate, k + 1)
        _rebuild_storage(scenario, average)
        r_mu, r_lam, r_nu = _residuals(scenario, average)

        check_now = (k + 1) % params.gap_interval == 0 or k + 1 == params.max_iters
        delivered_residual = np.inf
        if check_now:
            projected = project_to_balance(scenario, average)
            cost = evaluate_net_cost(scenario, projected, sets, check=False)
            gap = (cost.total - best_dual) / max(1.0, abs(cost.total))
            delivered_residual = max(_residuals(scenario, projected))

        if params.record_every and (k % params.record_every == 0 or check_now):
            records.append(
                IterationRecord(
                    k=k,
                    multipliers=z,
                    g_mu=g[0].copy(),
                    g_lam=g[1].copy(),
                    g_nu=g[2].copy(),
                    residual_mu=r_mu,
                    residual_lam=r_lam,
                    residual_nu=r_nu,
                    dual_value=dual_value,
                    best_dual=best_dual,
                    gap=gap if check_now else None,
                    averaged=average.copy(),
                )
            )

        if check_now and delivered_residual <= params.tol_residual and gap <= params.tol_gap:
            converged = True
            k += 1
            break
        z = dual_step(z, g, stepsize)
    else:
        k = params.max_iters

    projected = project_to_balance(scenario, average)
    cost = evaluate_net_cost(scenario, projected, sets, check=False)
    gap = (cost.total - best_dual) / max(1.0, abs(cost.total))
    return RunResult(
        schedule=projected,
        schedule_averaged=average,
        multipliers=z,
        records=records,
        converged=converged,
        iterations=k,
        stepsize=stepsize,
        best_dual=float(best_dual),
        primal_cost=cost,
        gap=float(gap),
        residuals_averaged=_residuals(scenario, average),
        residuals_delivered=_residuals(scenario, projected),
        runtime=time.perf_counter() - t0,
        worst_case=cost.worst,
    )


# ---------------------------------------------------------------------------
# CSV artifacts


def _fmt(x) -> str:
    return f"{float(x):.9g}"


def write_iterations_csv(path, records: list[IterationRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "residual_mu", "residual_lam", "residual_nu", "dual_value", "best_dual", "gap"])
        for r in records:
            w.writerow(
                [r.k]
                + [_fmt(v) for v in (r.residual_mu, r.residual_lam, r.residual_nu, r.dual_value, r.best_dual)]
                + ([_fmt(r.gap)] if r.gap is not None else [""])
            )


def write_schedule_csv(path, scenario: Scenario, x: Schedule, worst: WorstCaseResult) -> None:
    M = len(scenario.generators)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["slot", "label", "fixed_load", "p_g_total"]
        header += [f"p_g_{m + 1}" for m in range(M)]
        header += ["p_d_total", "p_e_total", "p_b_total", "p_r", "p_tilde_r", "w_worst"]
        w.writerow(header)
        for t in range(scenario.T):
            row = [t + 1, scenario.horizon.slot_labels[t], _fmt(scenario.market.fixed_load[t])]
            row.append(_fmt(x.p_g[:, t].sum()))
            row += [_fmt(x.p_g[m, t]) for m in range(M)]
            row += [
                _fmt(x.p_d[:, t].sum()),
                _fmt(x.p_e[:, t].sum()),
                _fmt(x.p_b[:, t].sum()),
                _fmt(x.p_r[t]),
                _fmt(x.p_tilde_r[t]),
                _fmt(worst.worst_total_per_slot[t]),
            ]
            w.writerow(row)


def write_storage_csv(path, scenario: Scenario, x: Schedule) -> None:
    J = len(scenario.storage)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["slot", "label"]
        for j in range(J):
            header += [f"p_b_{j + 1}", f"b_{j + 1}"]
        w.writerow(header)
        for t in range(scenario.T):
            row = [t + 1, scenario.horizon.slot_labels[t]]
            for j in range(J):
                row += [_fmt(x.p_b[j, t]), _fmt(x.b[j, t])]
            w.writerow(row)


def write_class2_csv(path, scenario: Scenario, x: Schedule) -> None:
    Q = len(scenario.class2)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["slot", "label"] + [f"p_e_{q + 1}" for q in range(Q)])
        for t in range(scenario.T):
            w.writerow(
                [t + 1, scenario.horizon.slot_labels[t]] + [_fmt(x.p_e[q, t]) for q in range(Q)]
            )


def write_costs_csv(path, cost: CostBreakdown, extra: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["component", "cents"])
        w.writerow(["generation", _fmt(cost.generation)])
        w.writerow(["class1_utility", _fmt(cost.class1_utility)])
        w.writerow(["class2_utility", _fmt(cost.class2_utility)])
        w.writerow(["storage", _fmt(cost.storage)])
        w.writerow(["transaction_worst", _fmt(cost.transaction_worst)])
        w.writerow(["total", _fmt(cost.total)])
        for key, val in (extra or {}).items():
            w.writerow([key, _fmt(val)])
