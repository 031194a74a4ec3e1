"""Problem data model: loads, generators, storage, renewable uncertainty, prices.

All monetary quantities are stored in cents so quadratic cost coefficients
(given in dollars in the reference tables) and hourly prices (given in cents)
share one unit.  Slots are one hour long, which makes kW and kWh numerically
interchangeable throughout.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml


class ScenarioError(ValueError):
    pass


class ScenarioParseError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"scenario validation failed: {lines}")


@dataclass(frozen=True)
class Violation:
    code: str
    where: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.where}: {self.message}"


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class Horizon:
    T: int
    slot_duration: float = 1.0
    slot_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.slot_labels:
            object.__setattr__(self, "slot_labels", tuple(f"t{t}" for t in range(1, self.T + 1)))
        else:
            object.__setattr__(self, "slot_labels", tuple(self.slot_labels))


@dataclass(frozen=True)
class Generator:
    p_min: float
    p_max: float
    ramp_up: float
    ramp_down: float
    cost_a: float  # cents / (kWh)^2
    cost_b: float  # cents / kWh
    initial_output: float | None = None

    def cost(self, p):
        p = _arr(p)
        return float(np.sum(self.cost_a * p**2 + self.cost_b * p))


@dataclass(frozen=True)
class Class1Load:
    p_min: float
    p_max: float
    util_c: float  # cents / (kWh)^2, nonpositive
    util_d: float  # cents / kWh

    def utility(self, p):
        p = _arr(p)
        return float(np.sum(self.util_c * p**2 + self.util_d * p))


@dataclass(frozen=True)
class Class2Load:
    p_max_per_slot: np.ndarray  # length T, zero outside the window
    energy_total: float
    start_slot: int  # 1-based, inclusive
    stop_slot: int  # 1-based, inclusive
    util_weights: np.ndarray  # cents / kWh, length T

    def __post_init__(self):
        object.__setattr__(self, "p_max_per_slot", _arr(self.p_max_per_slot))
        object.__setattr__(self, "util_weights", _arr(self.util_weights))

    def window(self) -> np.ndarray:
        """0-based slot indices inside [start_slot, stop_slot]."""
        return np.arange(self.start_slot - 1, self.stop_slot)

    def utility(self, p):
        p = _arr(p)
        return float(np.sum(self.util_weights * p))


@dataclass(frozen=True)
class StorageUnit:
    b_max: float
    b_min_final: float
    b_initial: float
    p_chg_min: float  # negative: discharge limit
    p_chg_max: float
    efficiency: float  # fraction of stored energy available for discharge
    dod: float  # depth-of-discharge target, fraction of capacity
    cost_weights: np.ndarray  # cents / kWh, length T

    def __post_init__(self):
        object.__setattr__(self, "cost_weights", _arr(self.cost_weights))

    def cost(self, b):
        b = _arr(b)
        floor = (1.0 - self.dod) * self.b_max
        return float(np.sum(self.cost_weights * (floor - b)))


@dataclass(frozen=True)
class UncertaintyModel:
    """Polyhedral set of admissible renewable trajectories.

    kind == "joint": one budget per sub-horizon over the *total* output of all
    facilities; sub_horizons is a list of (start, stop) 1-based inclusive slot
    ranges and budget_lower/budget_upper match it.

    kind == "per_facility": each facility has its own sub-horizon partition and
    budgets; sub_horizons / budget_lower / budget_upper are lists indexed by
    facility.
    """

    kind: str
    lower: np.ndarray  # (I, T)
    upper: np.ndarray  # (I, T)
    sub_horizons: tuple
    budget_lower: tuple
    budget_upper: tuple

    def __post_init__(self):
        object.__setattr__(self, "lower", np.atleast_2d(_arr(self.lower)))
        object.__setattr__(self, "upper", np.atleast_2d(_arr(self.upper)))
        object.__setattr__(self, "sub_horizons", _to_tuple(self.sub_horizons))
        object.__setattr__(self, "budget_lower", _to_tuple(self.budget_lower))
        object.__setattr__(self, "budget_upper", _to_tuple(self.budget_upper))

    @property
    def n_facilities(self) -> int:
        return self.lower.shape[0]

    @property
    def T(self) -> int:
        return self.lower.shape[1]

    def joint_blocks(self):
        """Yield (slot indices, budget lower, budget upper) per sub-horizon."""
        if self.kind != "joint":
            raise ScenarioError("joint_blocks is only defined for the joint model")
        for (start, stop), lo, hi in zip(self.sub_horizons, self.budget_lower, self.budget_upper):
            yield np.arange(start - 1, stop), float(lo), float(hi)

    def facility_blocks(self, i: int):
        if self.kind != "per_facility":
            raise ScenarioError("facility_blocks is only defined for the per-facility model")
        for (start, stop), lo, hi in zip(self.sub_horizons[i], self.budget_lower[i], self.budget_upper[i]):
            yield np.arange(start - 1, stop), float(lo), float(hi)


def _to_tuple(x):
    if isinstance(x, (list, tuple, np.ndarray)):
        return tuple(_to_tuple(e) for e in x)
    return x


@dataclass(frozen=True)
class Market:
    purchase_price: np.ndarray  # cents / kWh
    sell_price: np.ndarray  # cents / kWh
    fixed_load: np.ndarray  # kW
    spinning_reserve: np.ndarray  # kW
    p_r_min: float
    p_r_max: float

    def __post_init__(self):
        for name in ("purchase_price", "sell_price", "fixed_load", "spinning_reserve"):
            object.__setattr__(self, name, _arr(getattr(self, name)))


@dataclass(frozen=True)
class Scenario:
    name: str
    horizon: Horizon
    generators: tuple[Generator, ...]
    class1: tuple[Class1Load, ...]
    class2: tuple[Class2Load, ...]
    storage: tuple[StorageUnit, ...]
    uncertainty: UncertaintyModel
    market: Market

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "class1", tuple(self.class1))
        object.__setattr__(self, "class2", tuple(self.class2))
        object.__setattr__(self, "storage", tuple(self.storage))

    @property
    def T(self) -> int:
        return self.horizon.T

    @property
    def total_gen_capacity(self) -> float:
        return float(sum(g.p_max for g in self.generators))


def validate_scenario(scenario: Scenario) -> list[Violation]:
    """Check every static invariant; returns an empty list when the scenario is usable."""
    v: list[Violation] = []
    T = scenario.horizon.T

    def bad(code, where, message):
        v.append(Violation(code, where, message))

    if T < 1:
        bad("horizon", "horizon", f"T must be >= 1, got {T}")
        return v
    if scenario.horizon.slot_duration != 1.0:
        bad("horizon", "horizon", "slot_duration must be 1.0 (kW/kWh identity relies on it)")
    if len(scenario.horizon.slot_labels) != T:
        bad("horizon", "horizon", "slot_labels length differs from T")

    for m, g in enumerate(scenario.generators, start=1):
        where = f"generator[{m}]"
        if not 0 <= g.p_min <= g.p_max:
            bad("generator-box", where, f"need 0 <= p_min <= p_max, got [{g.p_min}, {g.p_max}]")
        if g.ramp_up < 0 or g.ramp_down < 0:
            bad("generator-ramp", where, "ramp limits must be nonnegative")
        if g.cost_a < 0:
            bad("generator-convexity", where, f"cost_a must be >= 0 for a convex cost, got {g.cost_a}")
        if g.initial_output is not None:
            if g.initial_output - g.ramp_down > g.p_max or g.initial_output + g.ramp_up < g.p_min:
                bad("generator-initial", where, "output box unreachable from initial_output in one ramp step")

    for n, load in enumerate(scenario.class1, start=1):
        where = f"class1[{n}]"
        if not 0 <= load.p_min <= load.p_max:
            bad("class1-box", where, f"need 0 <= p_min <= p_max, got [{load.p_min}, {load.p_max}]")
        if load.util_c > 0:
            bad("class1-concavity", where, f"util_c must be <= 0 for a concave utility, got {load.util_c}")

    for q, load in enumerate(scenario.class2, start=1):
        where = f"class2[{q}]"
        if not 1 <= load.start_slot <= load.stop_slot <= T:
            bad("class2-window", where, f"window [{load.start_slot}, {load.stop_slot}] not inside 1..{T}")
            continue
        if load.p_max_per_slot.shape != (T,) or load.util_weights.shape != (T,):
            bad("class2-shape", where, "per-slot arrays must have length T")
            continue
        if np.any(load.p_max_per_slot < 0):
            bad("class2-box", where, "p_max_per_slot must be nonnegative")
        inside = np.zeros(T, dtype=bool)
        inside[load.window()] = True
        if np.any(load.p_max_per_slot[~inside] != 0):
            bad("class2-window", where, "p_max_per_slot must be zero outside the consumption window")
        if load.energy_total < 0:
            bad("class2-energy", where, "energy_total must be nonnegative")
        cap = float(load.p_max_per_slot.sum())
        if cap < load.energy_total:
            bad(
                "class2-infeasible",
                where,
                f"window capacity {cap} kWh cannot supply required energy {load.energy_total} kWh",
            )

    for j, unit in enumerate(scenario.storage, start=1):
        where = f"storage[{j}]"
        if not 0 <= unit.b_initial <= unit.b_max:
            bad("storage-box", where, f"need 0 <= b_initial <= b_max, got {unit.b_initial} vs {unit.b_max}")
        if not 0 <= unit.b_min_final <= unit.b_max:
            bad("storage-box", where, "need 0 <= b_min_final <= b_max")
        if not unit.p_chg_min < 0 < unit.p_chg_max:
            bad("storage-power", where, f"need p_chg_min < 0 < p_chg_max, got [{unit.p_chg_min}, {unit.p_chg_max}]")
        if not 0 < unit.efficiency <= 1:
            bad("storage-efficiency", where, f"efficiency must be in (0, 1], got {unit.efficiency}")
        if not 0 <= unit.dod <= 1:
            bad("storage-dod", where, f"dod must be in [0, 1], got {unit.dod}")
        if unit.cost_weights.shape != (T,):
            bad("storage-shape", where, "cost_weights must have length T")
        elif np.any(unit.cost_weights < 0):
            bad("storage-cost", where, "cost_weights must be nonnegative")
        if unit.p_chg_max > 0 and unit.b_initial + T * unit.p_chg_max < unit.b_min_final:
            bad("storage-final", where, "b_min_final unreachable from b_initial within the horizon")

    u = scenario.uncertainty
    where = "uncertainty"
    if u.kind not in ("joint", "per_facility"):
        bad("uncertainty-kind", where, f"unknown kind {u.kind!r}")
    elif u.lower.shape != u.upper.shape or u.lower.shape[1] != T:
        bad("uncertainty-shape", where, "bound arrays must be (facilities, T)")
    else:
        if np.any(u.lower < 0):
            bad("uncertainty-bounds", where, "lower bounds must be nonnegative")
        if np.any(u.lower > u.upper):
            bad("uncertainty-bounds", where, "lower bound exceeds upper bound")
        partitions = [u.sub_horizons] if u.kind == "joint" else list(u.sub_horizons)
        budgets_lo = [u.budget_lower] if u.kind == "joint" else list(u.budget_lower)
        budgets_hi = [u.budget_upper] if u.kind == "joint" else list(u.budget_upper)
        if u.kind == "per_facility" and len(partitions) != u.n_facilities:
            bad("uncertainty-partition", where, "need one sub-horizon partition per facility")
            partitions = []
        for fi, (part, blo, bhi) in enumerate(zip(partitions, budgets_lo, budgets_hi)):
            pwhere = where if u.kind == "joint" else f"{where}[facility {fi + 1}]"
            if len(part) != len(blo) or len(part) != len(bhi):
                bad("uncertainty-partition", pwhere, "budgets must match the number of sub-horizons")
                continue
            expected_start = 1
            for (start, stop), lo, hi in zip(part, blo, bhi):
                if start != expected_start or stop < start:
                    bad("uncertainty-partition", pwhere, "sub-horizons must be consecutive and non-overlapping")
                    break
                expected_start = stop + 1
                if lo > hi:
                    bad("uncertainty-budget", pwhere, f"budget lower {lo} exceeds upper {hi}")
                slots = np.arange(start - 1, stop)
                if u.kind == "joint":
                    lo_sum = float(u.lower[:, slots].sum())
                    hi_sum = float(u.upper[:, slots].sum())
                else:
                    lo_sum = float(u.lower[fi, slots].sum())
                    hi_sum = float(u.upper[fi, slots].sum())
                if lo_sum > hi or hi_sum < lo:
                    bad("uncertainty-empty", pwhere, f"sub-horizon [{start},{stop}] has an empty uncertainty set")
            else:
                if expected_start != T + 1:
                    bad("uncertainty-partition", pwhere, "sub-horizons must cover exactly slots 1..T")

    mk = scenario.market
    where = "market"
    for name in ("purchase_price", "sell_price", "fixed_load", "spinning_reserve"):
        if getattr(mk, name).shape != (T,):
            bad("market-shape", where, f"{name} must have length T")
            return v
    if np.any(mk.sell_price < 0):
        bad("market-price", where, "sell prices must be nonnegative")
    over = np.nonzero(mk.sell_price > mk.purchase_price)[0]
    if over.size:
        t = int(over[0]) + 1
        bad(
            "price-condition",
            where,
            f"sell price exceeds purchase price at slot {t} "
            f"({mk.sell_price[t - 1]} > {mk.purchase_price[t - 1]}); the worst-case "
            "transaction cost is only convex when sell <= purchase in every slot",
        )
    if mk.p_r_min > mk.p_r_max:
        bad("market-box", where, "p_r_min exceeds p_r_max")

    headroom = float(sum(g.p_max - g.p_min for g in scenario.generators))
    short = np.nonzero(mk.spinning_reserve > headroom)[0]
    if short.size:
        t = int(short[0]) + 1
        bad(
            "reserve-infeasible",
            "market",
            f"spinning reserve {mk.spinning_reserve[t - 1]} kW at slot {t} exceeds "
            f"total generator headroom {headroom} kW",
        )
    return v


# ---------------------------------------------------------------------------
# File format


def _scenario_to_dict(s: Scenario) -> dict:
    def num(x):
        return [float(e) for e in np.asarray(x).ravel()] if np.ndim(x) else float(x)

    d = {
        "name": s.name,
        "horizon": {
            "T": s.horizon.T,
            "slot_duration": s.horizon.slot_duration,
            "slot_labels": list(s.horizon.slot_labels),
        },
        "generators": [
            {
                "p_min": g.p_min,
                "p_max": g.p_max,
                "ramp_up": g.ramp_up,
                "ramp_down": g.ramp_down,
                "cost_a": g.cost_a,
                "cost_b": g.cost_b,
                **({"initial_output": g.initial_output} if g.initial_output is not None else {}),
            }
            for g in s.generators
        ],
        "class1_loads": [
            {"p_min": c.p_min, "p_max": c.p_max, "util_c": c.util_c, "util_d": c.util_d} for c in s.class1
        ],
        "class2_loads": [
            {
                "p_max_per_slot": num(c.p_max_per_slot),
                "energy_total": c.energy_total,
                "start_slot": c.start_slot,
                "stop_slot": c.stop_slot,
                "util_weights": num(c.util_weights),
            }
            for c in s.class2
        ],
        "storage": [
            {
                "b_max": u.b_max,
                "b_min_final": u.b_min_final,
                "b_initial": u.b_initial,
                "p_chg_min": u.p_chg_min,
                "p_chg_max": u.p_chg_max,
                "efficiency": u.efficiency,
                "dod": u.dod,
                "cost_weights": num(u.cost_weights),
            }
            for u in s.storage
        ],
        "uncertainty": {
            "kind": s.uncertainty.kind,
            "lower": [num(row) for row in s.uncertainty.lower],
            "upper": [num(row) for row in s.uncertainty.upper],
            "sub_horizons": _nested_list(s.uncertainty.sub_horizons),
            "budget_lower": _nested_list(s.uncertainty.budget_lower),
            "budget_upper": _nested_list(s.uncertainty.budget_upper),
        },
        "market": {
            "purchase_price": num(s.market.purchase_price),
            "sell_price": num(s.market.sell_price),
            "fixed_load": num(s.market.fixed_load),
            "spinning_reserve": num(s.market.spinning_reserve),
            "p_r_min": s.market.p_r_min,
            "p_r_max": s.market.p_r_max,
        },
    }
    return d


def _nested_list(x):
    if isinstance(x, tuple):
        return [_nested_list(e) for e in x]
    return x


def _scenario_from_dict(d: dict) -> Scenario:
    try:
        hz = d["horizon"]
        horizon = Horizon(int(hz["T"]), float(hz.get("slot_duration", 1.0)), tuple(hz.get("slot_labels", ())))
        generators = tuple(Generator(**g) for g in d.get("generators", []))
        class1 = tuple(Class1Load(**c) for c in d.get("class1_loads", []))
        class2 = tuple(Class2Load(**c) for c in d.get("class2_loads", []))
        storage = tuple(StorageUnit(**u) for u in d.get("storage", []))
        uncertainty = UncertaintyModel(**d["uncertainty"])
        market = Market(**d["market"])
        return Scenario(
            name=str(d.get("name", "unnamed")),
            horizon=horizon,
            generators=generators,
            class1=class1,
            class2=class2,
            storage=storage,
            uncertainty=uncertainty,
            market=market,
        )
    except (KeyError, TypeError) as exc:
        raise ScenarioParseError(f"scenario file is missing or mistypes a field: {exc}") from exc


def save_scenario(scenario: Scenario, path) -> None:
    text = yaml.safe_dump(_scenario_to_dict(scenario), sort_keys=False, default_flow_style=None)
    header = (
        "# mgrobust scenario file.\n"
        "# Units: kW and kWh for power/energy, cents for all monetary values.\n"
        "# Arrays are in slot order (slot 1 first); slots are 1-based and one hour long.\n"
    )
    Path(path).write_text(header + text)


def load_scenario(path) -> Scenario:
    """Parse and fully validate a scenario file; any violated invariant aborts."""
    raw = Path(path).read_text()
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ScenarioParseError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioParseError(f"{path} does not contain a scenario mapping")
    scenario = _scenario_from_dict(data)
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioValidationError(violations)
    return scenario


# ---------------------------------------------------------------------------
# Reference instances

_SLOT_LABELS = ("4PM", "5PM", "6PM", "7PM", "8PM", "9PM", "10PM", "11PM")

# Generating capacities, ramp limits and cost coefficients (costs converted $ -> cents).
_GENS = (
    (10.0, 50.0, 30.0, 0.6, 50.0),
    (8.0, 45.0, 25.0, 0.3, 25.0),
    (15.0, 70.0, 40.0, 0.4, 30.0),
)

_CLASS1 = (
    (0.5, 10.0, -0.2, 20.0),
    (4.0, 16.0, -0.17, 17.0),
    (2.0, 15.0, -0.3, 30.0),
    (5.5, 20.0, -0.24, 24.0),
    (1.0, 27.0, -0.15, 15.0),
    (7.0, 32.0, -0.37, 37.0),
)

# (cap, energy, start slot, stop slot): start/stop hours 6PM/7PM/11PM/12AM
# map to slots 3 / 4 / 7 / 8 under the 4PM..11PM slot labels.
_CLASS2 = (
    (1.2, 5.0, 3, 8),
    (1.55, 5.5, 4, 7),
    (1.3, 4.0, 3, 8),
    (1.7, 8.0, 3, 8),
)

_PI_WEIGHTS = (4.0, 3.5, 3.0, 2.5, 2.0, 1.5, 1.0, 0.5)

_WIND_LOWER = (
    (2.47, 2.27, 2.18, 1.97, 2.28, 2.66, 3.1, 3.38),
    (2.57, 1.88, 2.16, 1.56, 1.95, 3.07, 3.44, 3.11),
)
_WIND_UPPER = (
    (24.7, 22.7, 21.8, 19.7, 22.8, 26.6, 31.0, 33.8),
    (25.7, 18.8, 21.6, 15.6, 19.5, 30.7, 34.4, 31.1),
)

_FIXED_LOAD = (57.8, 58.4, 64.0, 65.1, 61.5, 58.8, 55.5, 51.0)
_ALPHA_A = (2.01, 2.2, 3.62, 6.6, 5.83, 3.99, 2.53, 2.34)
_BETA_A = (1.81, 1.98, 3.26, 5.94, 5.25, 3.59, 2.28, 2.11)
_ALPHA_B = (40.2, 44.0, 72.4, 132.0, 116.6, 79.8, 50.6, 46.8)
_BETA_B = (36.18, 39.6, 65.16, 118.8, 104.94, 71.82, 45.54, 42.12)


def _paper_scenario(name: str, alpha, beta) -> Scenario:
    T = 8
    class2 = tuple(
        Class2Load(
            p_max_per_slot=[cap if start <= t <= stop else 0.0 for t in range(1, T + 1)],
            energy_total=energy,
            start_slot=start,
            stop_slot=stop,
            util_weights=list(_PI_WEIGHTS),
        )
        for cap, energy, start, stop in _CLASS2
    )
    storage = tuple(
        StorageUnit(
            b_max=30.0,
            b_min_final=5.0,
            b_initial=5.0,
            p_chg_min=-10.0,
            p_chg_max=10.0,
            efficiency=0.95,
            dod=0.0,
            cost_weights=[0.0] * T,
        )
        for _ in range(3)
    )
    return Scenario(
        name=name,
        horizon=Horizon(T, 1.0, _SLOT_LABELS),
        generators=tuple(Generator(pmin, pmax, r, r, a, b) for pmin, pmax, r, a, b in _GENS),
        class1=tuple(Class1Load(*c) for c in _CLASS1),
        class2=class2,
        storage=storage,
        uncertainty=UncertaintyModel(
            kind="joint",
            lower=_WIND_LOWER,
            upper=_WIND_UPPER,
            sub_horizons=((1, T),),
            budget_lower=(40.0,),
            budget_upper=(360.0,),
        ),
        market=Market(
            purchase_price=alpha,
            sell_price=beta,
            fixed_load=_FIXED_LOAD,
            spinning_reserve=[10.0] * T,
            p_r_min=0.0,
            p_r_max=500.0,
        ),
    )


def _reduced_scenario() -> Scenario:
    # 4-slot truncation of case_a with the first entries of each table.  The
    # class-2 energy requirement shrinks to fit the truncated window, the
    # renewable budget is rescaled to the remaining coordinates, and the grid
    # transaction box is tightened (still non-binding) so the dual iterations
    # settle faster on this test instance.
    T = 4
    cap, _, start, stop = _CLASS2[0]
    stop = min(stop, T)
    class2 = (
        Class2Load(
            p_max_per_slot=[cap if start <= t <= stop else 0.0 for t in range(1, T + 1)],
            energy_total=2.0,
            start_slot=start,
            stop_slot=stop,
            util_weights=list(_PI_WEIGHTS[:T]),
        ),
    )
    return Scenario(
        name="reduced",
        horizon=Horizon(T, 1.0, _SLOT_LABELS[:T]),
        generators=tuple(Generator(pmin, pmax, r, r, a, b) for pmin, pmax, r, a, b in _GENS[:2]),
        class1=tuple(Class1Load(*c) for c in _CLASS1[:2]),
        class2=class2,
        storage=(
            StorageUnit(
                b_max=30.0,
                b_min_final=5.0,
                b_initial=5.0,
                p_chg_min=-10.0,
                p_chg_max=10.0,
                efficiency=0.95,
                dod=0.0,
                cost_weights=[0.0] * T,
            ),
        ),
        uncertainty=UncertaintyModel(
            kind="joint",
            lower=(_WIND_LOWER[0][:T],),
            upper=(_WIND_UPPER[0][:T],),
            sub_horizons=((1, T),),
            budget_lower=(20.0,),
            budget_upper=(70.0,),
        ),
        market=Market(
            purchase_price=_ALPHA_A[:T],
            sell_price=_BETA_A[:T],
            fixed_load=_FIXED_LOAD[:T],
            spinning_reserve=[10.0] * T,
            p_r_min=0.0,
            p_r_max=120.0,
        ),
    )


BUILTIN_NAMES = ("case_a", "case_b", "reduced")


def builtin_scenario(name: str) -> Scenario:
    """Return one of the shipped reference instances."""
    if name == "case_a":
        return _paper_scenario("case_a", _ALPHA_A, _BETA_A)
    if name == "case_b":
        return _paper_scenario("case_b", _ALPHA_B, _BETA_B)
    if name == "reduced":
        return _reduced_scenario()
    raise ScenarioError(f"unknown builtin scenario {name!r}; pick one of {', '.join(BUILTIN_NAMES)}")


def scenario_data_path(name: str) -> Path:
    """Path of the shipped scenario file for a builtin name."""
    return Path(__file__).parent / "data" / f"{name}.scenario"
