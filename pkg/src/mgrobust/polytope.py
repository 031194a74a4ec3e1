"""Vertex enumeration for box-plus-budget polytopes and their Cartesian products.

The only polytopes handled here are of the form

    {a in R^n : lower <= a <= upper,  sum_min <= 1'a <= sum_max}

and block-wise products of such sets.  Their vertices are either feasible box
corners, or points with exactly one coordinate pinned by an active budget
bound while the rest sit on box bounds.  Enumeration is deterministic:
candidates are generated in lexicographic order over the bound choices so the
resulting vertex list is reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEDUP_TOL = 1e-12
FEAS_TOL = 1e-9
DIM_GUARD = 20
PRODUCT_GUARD = 2_000_000


class PolytopeError(ValueError):
    pass


class EmptyPolytopeError(PolytopeError):
    pass


class DimensionGuardError(PolytopeError):
    """Raised when enumeration would be exponentially large.

    Vertex counts grow exponentially with the block dimension, so blocks above
    DIM_GUARD coordinates are refused unless explicitly allowed.
    """


@dataclass(frozen=True)
class BoxBudgetPolytope:
    lower: np.ndarray
    upper: np.ndarray
    sum_min: float
    sum_max: float

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise PolytopeError("lower/upper must be 1-d arrays of equal length")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if np.any(lower > upper):
            raise EmptyPolytopeError("lower bound exceeds upper bound")
        if self.sum_min > self.sum_max:
            raise EmptyPolytopeError("sum_min exceeds sum_max")
        if lower.sum() > self.sum_max or upper.sum() < self.sum_min:
            raise EmptyPolytopeError("box and budget constraints do not intersect")

    @property
    def dim(self) -> int:
        return self.lower.size

    def contains(self, v: np.ndarray, tol: float = FEAS_TOL) -> bool:
        v = np.asarray(v, dtype=float)
        if np.any(v < self.lower - tol) or np.any(v > self.upper + tol):
            return False
        s = v.sum()
        return self.sum_min - tol <= s <= self.sum_max + tol


@dataclass(frozen=True)
class ProductPolytope:
    blocks: tuple[BoxBudgetPolytope, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise PolytopeError("product polytope needs at least one block")

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)


@dataclass(frozen=True)
class VertexList:
    dimension: int
    vertices: np.ndarray  # (count, dimension)
    provenance: str = ""

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=float))
        if v.ndim != 2 or v.shape[1] != self.dimension:
            raise PolytopeError("vertex array shape does not match dimension")
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return self.vertices.shape[0]


def _lex_corners(n: int) -> np.ndarray:
    """All 0/1 choice rows over n coordinates, lexicographic, 0 (=lower) first."""
    if n == 0:
        return np.zeros((1, 0))
    m = np.arange(2**n, dtype=np.int64)
    return ((m[:, None] >> (n - 1 - np.arange(n))) & 1).astype(float)


def _dedup_rows(rows: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    """Drop duplicate rows (componentwise within tol), keeping first occurrences."""
    if rows.shape[0] <= 1:
        return rows
    order = np.lexsort(rows.T[::-1])
    srt = rows[order]
    same_as_prev = np.max(np.abs(np.diff(srt, axis=0)), axis=1) <= tol
    cluster = np.concatenate([[0], np.cumsum(~same_as_prev)])
    reps = np.full(cluster[-1] + 1, rows.shape[0], dtype=np.int64)
    np.minimum.at(reps, cluster, order)
    return rows[np.sort(reps)]


def enumerate_box_budget(
    p: BoxBudgetPolytope,
    feas_tol: float = FEAS_TOL,
    allow_large: bool = False,
) -> VertexList:
    """Enumerate every vertex of a box-plus-budget polytope.

    Candidates come in two families: all box corners whose coordinate sum
    respects the budget, and, for each coordinate, the points where that
    coordinate is pinned by an active budget bound while all others sit on
    box bounds.  Duplicates (which arise when lower == upper somewhere, or
    when a pinned value lands exactly on a box bound) are merged.
    """
    n = p.dim
    if n > DIM_GUARD and not allow_large:
        raise DimensionGuardError(
            f"block dimension {n} exceeds {DIM_GUARD}; vertex enumeration is "
            "exponential in the dimension (pass allow_large=True to override)"
        )
    if n == 0:
        return VertexList(0, np.zeros((1, 0)), provenance="box-budget")

    span = p.upper - p.lower
    corners = p.lower + _lex_corners(n) * span
    sums = corners.sum(axis=1)
    feasible = (sums >= p.sum_min - feas_tol) & (sums <= p.sum_max + feas_tol)
    candidates = [corners[feasible]]

    # One coordinate pinned by an active budget bound, the rest on box bounds.
    others = _lex_corners(n - 1)
    for i in range(n):
        rest_low = np.delete(p.lower, i)
        rest_span = np.delete(span, i)
        rest = rest_low + others * rest_span
        rest_sum = rest.sum(axis=1)
        for target in (p.sum_min, p.sum_max):
            pinned = target - rest_sum
            ok = (pinned >= p.lower[i] - feas_tol) & (pinned <= p.upper[i] + feas_tol)
            if not np.any(ok):
                continue
            block = np.empty((int(ok.sum()), n))
            block[:, :i] = rest[ok, :i]
            block[:, i] = pinned[ok]
            block[:, i + 1 :] = rest[ok, i:]
            candidates.append(block)

    verts = _dedup_rows(np.concatenate(candidates, axis=0))
    if verts.shape[0] == 0:
        raise EmptyPolytopeError("no feasible vertex found")
    return VertexList(n, verts, provenance="box-budget")


def enumerate_product(
    p: ProductPolytope,
    feas_tol: float = FEAS_TOL,
    allow_large: bool = False,
) -> VertexList:
    """Cartesian product of per-block vertex lists, concatenated in block order.

    The resulting count is the product of the per-block counts; the last block
    index varies fastest.
    """
    parts = [enumerate_box_budget(b, feas_tol, allow_large) for b in p.blocks]
    total = 1
    for part in parts:
        total *= len(part)
    if total > PRODUCT_GUARD and not allow_large:
        raise DimensionGuardError(
            f"product would have {total} vertices (> {PRODUCT_GUARD}); "
            "pass allow_large=True to override"
        )
    out = parts[0].vertices
    for part in parts[1:]:
        left = np.repeat(out, len(part), axis=0)
        right = np.tile(part.vertices, (out.shape[0], 1))
        out = np.concatenate([left, right], axis=1)
    return VertexList(p.dim, out, provenance="product")


def certify_vertex(p: BoxBudgetPolytope, v: np.ndarray, tol: float = FEAS_TOL) -> bool:
    """Rank test: v is a vertex iff n linearly independent constraints are active."""
    v = np.asarray(v, dtype=float)
    if not p.contains(v, tol):
        raise PolytopeError("point is not feasible within tolerance")
    n = p.dim
    rows = []
    eye = np.eye(n)
    for i in range(n):
        if abs(v[i] - p.lower[i]) <= tol or abs(v[i] - p.upper[i]) <= tol:
            rows.append(eye[i])
    s = v.sum()
    if abs(s - p.sum_min) <= tol or abs(s - p.sum_max) <= tol:
        rows.append(np.ones(n))
    if len(rows) < n:
        return False
    return np.linalg.matrix_rank(np.array(rows)) == n


def linear_max_oracle(p: BoxBudgetPolytope, c: np.ndarray) -> tuple[float, np.ndarray]:
    """Maximize c'a over the polytope by greedy continuous-knapsack repair.

    Start every coordinate at the bound favored by the sign of c_i, then fix
    any budget violation by moving the coordinates with the smallest |c_i|
    first.  Exact for this constraint structure; used as an independent
    completeness oracle for the enumerated vertex lists.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (p.dim,):
        raise PolytopeError("direction has wrong dimension")
    a = np.where(c > 0, p.upper, p.lower).astype(float)
    s = a.sum()
    if s > p.sum_max:
        # Give back budget where it costs least.
        for i in sorted(range(p.dim), key=lambda i: (abs(c[i]), i)):
            room = a[i] - p.lower[i]
            move = min(room, s - p.sum_max)
            a[i] -= move
            s -= move
            if s <= p.sum_max:
                break
    elif s < p.sum_min:
        for i in sorted(range(p.dim), key=lambda i: (abs(c[i]), i)):
            room = p.upper[i] - a[i]
            move = min(room, p.sum_min - s)
            a[i] += move
            s += move
            if s >= p.sum_min:
                break
    return float(c @ a), a


def remark_cardinality_bound(n: int) -> int:
    """Upper bound on the candidate count before feasibility filtering."""
    return 2**n + 2 * n * 2 ** (n - 1)


def uncertainty_vertices(model, feas_tol: float = FEAS_TOL, allow_large: bool = False):
    """Vertex lists for a renewable-output uncertainty model.

    For the joint model this returns one VertexList per sub-horizon over the
    stacked (facility-major) coordinates of that sub-horizon; the worst-case
    maximization decomposes across sub-horizons so no cross-block product is
    taken.  For the per-facility model the per-(facility, sub-horizon) lists
    are concatenated per facility and then across facilities, giving a single
    VertexList over the full facility-major coordinate vector.
    """
    from .scenario import UncertaintyModel  # deferred: scenario imports nothing from here

    if not isinstance(model, UncertaintyModel):
        raise TypeError("expected an UncertaintyModel")
    if model.kind == "joint":
        out = []
        for slots, lo, hi in model.joint_blocks():
            block = BoxBudgetPolytope(
                lower=model.lower[:, slots].ravel(),
                upper=model.upper[:, slots].ravel(),
                sum_min=lo,
                sum_max=hi,
            )
            vl = enumerate_box_budget(block, feas_tol, allow_large)
            out.append(VertexList(vl.dimension, vl.vertices, provenance=f"joint-subhorizon-{len(out)}"))
        return out
    facility_lists = []
    for i in range(model.n_facilities):
        blocks = [
            BoxBudgetPolytope(
                lower=model.lower[i, slots],
                upper=model.upper[i, slots],
                sum_min=lo,
                sum_max=hi,
            )
            for slots, lo, hi in model.facility_blocks(i)
        ]
        facility_lists.append(enumerate_product(ProductPolytope(tuple(blocks)), feas_tol, allow_large))
    total = 1
    for fl in facility_lists:
        total *= len(fl)
    if total > PRODUCT_GUARD and not allow_large:
        raise DimensionGuardError(
            f"cross-facility product would have {total} vertices (> {PRODUCT_GUARD})"
        )
    out = facility_lists[0].vertices
    for fl in facility_lists[1:]:
        left = np.repeat(out, len(fl), axis=0)
        right = np.tile(fl.vertices, (out.shape[0], 1))
        out = np.concatenate([left, right], axis=1)
    return [VertexList(out.shape[1], out, provenance="per-facility")]
