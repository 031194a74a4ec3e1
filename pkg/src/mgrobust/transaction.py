"""Worst-case grid transaction cost and its subgradient.

The cost of trading the committed net injection p against the grid, under the
least favorable admissible renewable outcome, is

    max over w in W of  sum_t( half_spread[t] * |p[t] - s[t](w)|
                               + mid_price[t] * (p[t] - s[t](w)) )

where s[t](w) is the total renewable output in slot t.  The maximum of this
convex function over the polyhedral set W is attained at a vertex, so it is
evaluated over a precomputed candidate list.  Only per-slot totals enter the
objective, which allows two exact evaluation modes:

* "stacked": candidates are the vertices of W itself (facility-resolved);
* "aggregated" (joint budgets only): candidates are the vertices of the image
  of W under per-slot summation, which is again a box-plus-budget polytope
  with summed bounds.  The image is exact because slots occupy disjoint
  coordinates, so this mode gives the same maximum with exponentially fewer
  candidates.  It is what the iterative solver uses on the hot path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .polytope import BoxBudgetPolytope, enumerate_box_budget, uncertainty_vertices
from .scenario import Market, UncertaintyModel


@dataclass(frozen=True)
class PriceTransform:
    half_spread: np.ndarray  # (purchase - sell) / 2, nonnegative after validation
    mid_price: np.ndarray  # (purchase + sell) / 2

    @classmethod
    def from_market(cls, market: Market) -> "PriceTransform":
        alpha = np.asarray(market.purchase_price, dtype=float)
        beta = np.asarray(market.sell_price, dtype=float)
        return cls(half_spread=(alpha - beta) / 2.0, mid_price=(alpha + beta) / 2.0)


@dataclass(frozen=True)
class WorstCaseResult:
    cost: float
    worst_w: np.ndarray  # (facilities, T)
    worst_total_per_slot: np.ndarray  # (T,)


@dataclass(frozen=True)
class WorstCaseBlock:
    slots: np.ndarray  # 0-based slot indices covered by this block
    totals: np.ndarray  # (V, len(slots)) per-slot totals of each candidate
    vertices: np.ndarray  # (V, n_facilities * len(slots)) facility-major, or totals when aggregated
    n_facilities: int
    aggregated: bool


@dataclass(frozen=True)
class WorstCaseSets:
    """Candidate vertex data for worst-case evaluation, one block per sub-horizon."""

    blocks: tuple[WorstCaseBlock, ...]
    n_facilities: int
    T: int
    mode: str
    lower: np.ndarray  # (facilities, T) box bounds, kept for reconstruction
    upper: np.ndarray

    @property
    def total_candidates(self) -> int:
        return sum(b.totals.shape[0] for b in self.blocks)


def worst_case_sets(model: UncertaintyModel, mode: str = "auto") -> WorstCaseSets:
    """Prepare evaluation candidates for an uncertainty model.

    mode "auto" picks "aggregated" for joint budgets and "stacked" otherwise.
    Per-slot totals are cached per candidate at build time since the objective
    depends on the outcome only through them.
    """
    if mode == "auto":
        mode = "aggregated" if model.kind == "joint" else "stacked"
    if mode == "aggregated" and model.kind != "joint":
        raise ValueError("aggregated evaluation requires the joint uncertainty model")

    I = model.n_facilities
    blocks = []
    if mode == "aggregated":
        for slots, lo, hi in model.joint_blocks():
            poly = BoxBudgetPolytope(
                lower=model.lower[:, slots].sum(axis=0),
                upper=model.upper[:, slots].sum(axis=0),
                sum_min=lo,
                sum_max=hi,
            )
            verts = enumerate_box_budget(poly).vertices
            blocks.append(WorstCaseBlock(slots, verts, verts, I, True))
    else:
        vertex_lists = uncertainty_vertices(model)
        if model.kind == "joint":
            for vl, (slots, _, _) in zip(vertex_lists, model.joint_blocks()):
                v = vl.vertices
                totals = v.reshape(v.shape[0], I, slots.size).sum(axis=1)
                blocks.append(WorstCaseBlock(slots, np.ascontiguousarray(totals), v, I, False))
        else:
            (vl,) = vertex_lists
            slots = np.arange(model.T)
            v = vl.vertices
            totals = v.reshape(v.shape[0], I, model.T).sum(axis=1)
            blocks.append(WorstCaseBlock(slots, np.ascontiguousarray(totals), v, I, False))
    return WorstCaseSets(
        blocks=tuple(blocks),
        n_facilities=I,
        T=model.T,
        mode=mode,
        lower=model.lower,
        upper=model.upper,
    )


def _distribute_totals(sets: WorstCaseSets, slots: np.ndarray, totals: np.ndarray) -> np.ndarray:
    """Split per-slot totals into a feasible facility-resolved outcome.

    Facilities are filled in index order from their lower bounds; the result
    stays inside the box because each total lies between the summed bounds.
    """
    w = sets.lower[:, slots].copy()
    room = sets.upper[:, slots] - sets.lower[:, slots]
    extra = totals - w.sum(axis=0)
    for i in range(sets.n_facilities):
        take = np.minimum(room[i], np.maximum(extra, 0.0))
        w[i] += take
        extra -= take
    return w


def worst_case_cost(p_tilde, sets: WorstCaseSets, prices: PriceTransform) -> WorstCaseResult:
    """Worst-case transaction cost of a committed injection profile.

    Each block (sub-horizon) is maximized independently and the block costs
    add up.  Ties are broken toward the first candidate in the deterministic
    enumeration order.
    """
    p_tilde = np.asarray(p_tilde, dtype=float)
    total_cost = 0.0
    worst_w = np.zeros((sets.n_facilities, sets.T))
    worst_totals = np.zeros(sets.T)
    for block in sets.blocks:
        if block.totals.shape[0] == 0:
            raise ValueError("empty candidate list")
        idx, val = kernels.worst_vertex(
            block.totals,
            prices.half_spread[block.slots],
            prices.mid_price[block.slots],
            p_tilde[block.slots],
        )
        total_cost += val
        worst_totals[block.slots] = block.totals[idx]
        if block.aggregated:
            worst_w[:, block.slots] = _distribute_totals(sets, block.slots, block.totals[idx])
        else:
            worst_w[:, block.slots] = block.vertices[idx].reshape(sets.n_facilities, block.slots.size)
    return WorstCaseResult(cost=float(total_cost), worst_w=worst_w, worst_total_per_slot=worst_totals)


def modified_cost(p_tilde, nu, sets: WorstCaseSets, prices: PriceTransform) -> float:
    """Worst-case cost minus the linear coupling term nu'p; the bundle objective."""
    p_tilde = np.asarray(p_tilde, dtype=float)
    nu = np.asarray(nu, dtype=float)
    return worst_case_cost(p_tilde, sets, prices).cost - float(nu @ p_tilde)


def danskin_subgradient(p_tilde, nu, worst: WorstCaseResult, market: Market) -> np.ndarray:
    """Subgradient of the modified cost at p_tilde given its worst-case outcome.

    Slotwise: purchase price minus nu where the commitment meets or exceeds
    the worst-case renewable total (shortage side, ties included), sell price
    minus nu otherwise.
    """
    p_tilde = np.asarray(p_tilde, dtype=float)
    shortage = p_tilde >= worst.worst_total_per_slot
    return np.where(shortage, market.purchase_price, market.sell_price) - np.asarray(nu, dtype=float)


def transaction_cost_at(p_tilde, w, prices: PriceTransform) -> float:
    """Transaction cost for one fixed renewable outcome (no maximization)."""
    p_tilde = np.asarray(p_tilde, dtype=float)
    totals = np.asarray(w, dtype=float).reshape(-1, p_tilde.size).sum(axis=0)
    diff = p_tilde - totals
    return float(np.abs(diff) @ prices.half_spread + diff @ prices.mid_price)
