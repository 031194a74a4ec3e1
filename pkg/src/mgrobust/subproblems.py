"""Per-resource subproblem solvers invoked at every dual iteration.

Each local controller minimizes its own cost plus the price signals formed
from the current multipliers; the solvers are stateless and may run in any
order (or concurrently) within one iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import transaction
from .numerics import BundleParams, BundleResult, QuadraticProgram, box_rows, bundle_minimize, solve_lp, solve_qp
from .scenario import Class1Load, Class2Load, Generator, Market, Scenario, StorageUnit
from .transaction import PriceTransform, WorstCaseResult, WorstCaseSets


@dataclass(frozen=True)
class Multipliers:
    mu: np.ndarray  # spinning-reserve multiplier, nonnegative
    lam: np.ndarray  # supply-demand balance price
    nu: np.ndarray  # storage/renewable coupling price

    def __post_init__(self):
        for name in ("mu", "lam", "nu"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if np.any(~np.isfinite(self.mu)) or np.any(~np.isfinite(self.lam)) or np.any(~np.isfinite(self.nu)):
            raise ValueError("multipliers must be finite")
        if np.any(self.mu < 0):
            raise ValueError("mu must be nonnegative")

    @classmethod
    def zeros(cls, T: int) -> "Multipliers":
        return cls(np.zeros(T), np.zeros(T), np.zeros(T))


@dataclass
class Schedule:
    p_g: np.ndarray  # (M, T)
    p_d: np.ndarray  # (N, T)
    p_e: np.ndarray  # (Q, T)
    p_b: np.ndarray  # (J, T)
    b: np.ndarray  # (J, T)
    p_r: np.ndarray  # (T,)
    p_tilde_r: np.ndarray  # (T,)

    @classmethod
    def zeros(cls, scenario: Scenario) -> "Schedule":
        T = scenario.T
        return cls(
            p_g=np.zeros((len(scenario.generators), T)),
            p_d=np.zeros((len(scenario.class1), T)),
            p_e=np.zeros((len(scenario.class2), T)),
            p_b=np.zeros((len(scenario.storage), T)),
            b=np.zeros((len(scenario.storage), T)),
            p_r=np.zeros(T),
            p_tilde_r=np.zeros(T),
        )

    def copy(self) -> "Schedule":
        return Schedule(*(np.array(getattr(self, f)) for f in ("p_g", "p_d", "p_e", "p_b", "b", "p_r", "p_tilde_r")))


def solve_dg(gen: Generator, z: Multipliers) -> tuple[np.ndarray, float]:
    """Generator subproblem: quadratic cost plus reserve/balance price signals."""
    T = z.lam.size
    lin = gen.cost_b + z.mu - z.lam
    a = gen.cost_a if gen.cost_a > 1e-9 else 1e-9  # LP-regularize a linear cost
    H = 2.0 * a * np.eye(T)

    rows, rhs = box_rows(T, gen.p_min, gen.p_max)
    ramp_rows, ramp_rhs = [], []
    for t in range(1, T):
        r = np.zeros(T)
        r[t], r[t - 1] = 1.0, -1.0
        ramp_rows.append(r.copy())
        ramp_rhs.append(gen.ramp_up)
        ramp_rows.append(-r)
        ramp_rhs.append(gen.ramp_down)
    if gen.initial_output is not None:
        r = np.zeros(T)
        r[0] = 1.0
        ramp_rows.append(r.copy())
        ramp_rhs.append(gen.initial_output + gen.ramp_up)
        ramp_rows.append(-r)
        ramp_rhs.append(-(gen.initial_output - gen.ramp_down))
    if ramp_rows:
        rows = np.vstack([rows, ramp_rows])
        rhs = np.concatenate([rhs, ramp_rhs])

    if gen.initial_output is None:
        start = gen.p_min
    else:
        start = float(
            np.clip(
                np.clip(gen.initial_output, gen.p_min, gen.p_max),
                gen.initial_output - gen.ramp_down,
                gen.initial_output + gen.ramp_up,
            )
        )
    x0 = np.full(T, start)
    qp = QuadraticProgram(H, lin, A_ineq=rows, b_ineq=rhs)
    p, _ = solve_qp(qp, x0=x0)
    value = gen.cost(p) + float((z.mu - z.lam) @ p)
    return p, value


def solve_class1(load: Class1Load, z: Multipliers) -> tuple[np.ndarray, float]:
    """Slot-separable closed form for the adjustable-power load."""
    lam = z.lam
    if load.util_c < 0:
        p = np.clip((lam - load.util_d) / (2.0 * load.util_c), load.p_min, load.p_max)
    else:
        # Linear utility: bang-bang on the price comparison; ties go to p_min.
        p = np.where(lam >= load.util_d, load.p_min, load.p_max).astype(float)
    value = float(lam @ p) - load.utility(p)
    return p, value


def solve_class2(load: Class2Load, z: Multipliers) -> tuple[np.ndarray, float]:
    """Exact greedy for the fixed-energy load.

    Slots are filled to their caps in ascending order of the net price
    lam - weight (earlier slot first on ties) until the energy requirement is
    met; the marginal slot gets a partial fill.
    """
    T = z.lam.size
    p = np.zeros(T)
    window = load.window()
    kappa = z.lam[window] - load.util_weights[window]
    order = np.lexsort((window, kappa))
    remaining = load.energy_total
    for k in order:
        t = window[k]
        take = min(load.p_max_per_slot[t], remaining)
        p[t] = take
        remaining -= take
        if remaining <= 0:
            break
    value = float(z.lam @ p) - load.utility(p)
    return p, value


def solve_storage(unit: StorageUnit, z: Multipliers) -> tuple[np.ndarray, np.ndarray, float]:
    """Storage subproblem as an LP over charging powers.

    The stored-energy trajectory is eliminated through prefix sums, so the
    dynamics hold exactly by construction in the returned pair.
    """
    T = z.nu.size
    prefix = np.tril(np.ones((T, T)))
    psi = unit.cost_weights
    c = z.nu - prefix.T @ psi
    const = float(np.sum(psi) * ((1.0 - unit.dod) * unit.b_max - unit.b_initial))

    rows, rhs = box_rows(T, unit.p_chg_min, unit.p_chg_max)
    extra_rows = [prefix, -prefix, -prefix[-1:]]
    extra_rhs = [
        np.full(T, unit.b_max - unit.b_initial),
        np.full(T, unit.b_initial),
        np.array([unit.b_initial - unit.b_min_final]),
    ]
    # Discharge cannot exceed the usable fraction of the previous stored energy.
    eff = np.zeros((T, T))
    for t in range(T):
        eff[t, t] = -1.0
        if t:
            eff[t, :t] -= unit.efficiency
    extra_rows.append(eff)
    extra_rhs.append(np.full(T, unit.efficiency * unit.b_initial))
    rows = np.vstack([rows] + extra_rows)
    rhs = np.concatenate([rhs] + extra_rhs)

    if unit.b_initial >= unit.b_min_final:
        x0 = np.zeros(T)
    else:
        x0 = np.full(T, (unit.b_min_final - unit.b_initial) / T)
    p, lp_value = solve_lp(c, A_ineq=rows, b_ineq=rhs, x0=x0)
    b = unit.b_initial + prefix @ p
    return p, b, lp_value + const


@dataclass(frozen=True)
class RenewableSolution:
    p_r: np.ndarray
    p_tilde_r: np.ndarray
    value: float
    worst: WorstCaseResult
    bundle: BundleResult


def solve_renewable(
    market: Market,
    prices: PriceTransform,
    sets: WorstCaseSets,
    z: Multipliers,
    bundle_params: BundleParams | None = None,
) -> RenewableSolution:
    """Joint transaction subproblem: bang-bang committed power, bundle for the rest.

    The committed grid draw takes its lower bound wherever the coupling price
    is at least the balance price (ties included) and its upper bound
    otherwise.  The committed injection profile minimizes the worst-case
    transaction cost net of the coupling price via the proximal bundle method,
    started at the midpoint of the per-slot renewable bounds.
    """
    p_r = np.where(z.nu >= z.lam, market.p_r_min, market.p_r_max).astype(float)

    def oracle(p):
        worst = transaction.worst_case_cost(p, sets, prices)
        value = worst.cost - float(z.nu @ p)
        grad = transaction.danskin_subgradient(p, z.nu, worst, market)
        return value, grad

    slot_upper = sets.upper.sum(axis=0)
    slot_lower = sets.lower.sum(axis=0)
    span = np.maximum(slot_upper, 1.0)
    if bundle_params is None:
        bundle_params = BundleParams()
    if bundle_params.clamp_lo is None:
        bundle_params = BundleParams(
            **{
                **bundle_params.__dict__,
                "clamp_lo": -10.0 * span,
                "clamp_hi": 10.0 * span,
            }
        )
    p0 = 0.5 * (slot_lower + slot_upper)
    result = bundle_minimize(oracle, p0, bundle_params)
    worst = transaction.worst_case_cost(result.point, sets, prices)
    value = float((z.nu - z.lam) @ p_r) + result.value
    return RenewableSolution(p_r=p_r, p_tilde_r=result.point, value=value, worst=worst, bundle=result)


def solve_all(
    scenario: Scenario,
    prices: PriceTransform,
    sets: WorstCaseSets,
    z: Multipliers,
    bundle_params: BundleParams | None = None,
) -> tuple[Schedule, float, RenewableSolution]:
    """Run every local controller once; returns the iterate and the sum of
    subproblem optimal values (the variable part of the dual function)."""
    schedule = Schedule.zeros(scenario)
    total = 0.0
    for m, gen in enumerate(scenario.generators):
        schedule.p_g[m], val = solve_dg(gen, z)
        total += val
    for n, load in enumerate(scenario.class1):
        schedule.p_d[n], val = solve_class1(load, z)
        total += val
    for q, load in enumerate(scenario.class2):
        schedule.p_e[q], val = solve_class2(load, z)
        total += val
    for j, unit in enumerate(scenario.storage):
        schedule.p_b[j], schedule.b[j], val = solve_storage(unit, z)
        total += val
    res = solve_renewable(scenario.market, prices, sets, z, bundle_params)
    schedule.p_r = res.p_r
    schedule.p_tilde_r = res.p_tilde_r
    total += res.value
    return schedule, total, res
