"""Small dense convex solvers: active-set QP, simplex QP, proximal bundle.

Everything here is deterministic: ties in pivoting and tie-breaking
systematically prefer the lowest index, so identical inputs reproduce
identical iterates bit for bit.  Problem sizes are at most a few hundred
variables; all linear algebra is dense.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

LP_REGULARIZATION = 1e-9  # quadratic term added to LPs to pin a unique optimizer


class SolverError(RuntimeError):
    pass


class InfeasibleProblemError(SolverError):
    pass


class UnboundedProblemError(SolverError):
    pass


@dataclass(frozen=True)
class QuadraticProgram:
    """minimize 0.5 x'Hx + g'x  s.t.  A_ineq x <= b_ineq,  A_eq x = b_eq."""

    H: np.ndarray
    g: np.ndarray
    A_ineq: np.ndarray | None = None
    b_ineq: np.ndarray | None = None
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None

    def __post_init__(self):
        H = np.asarray(self.H, dtype=float)
        g = np.asarray(self.g, dtype=float)
        n = g.size
        if H.shape != (n, n):
            raise ValueError("H must be n x n")
        if not np.allclose(H, H.T, atol=1e-12):
            raise ValueError("H must be symmetric")
        scale = max(1.0, float(np.max(np.abs(H))))
        if np.linalg.eigvalsh(H).min() < -1e-10 * scale:
            raise ValueError("H must be positive semidefinite")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "g", g)
        for a_name, b_name in (("A_ineq", "b_ineq"), ("A_eq", "b_eq")):
            A = getattr(self, a_name)
            b = getattr(self, b_name)
            if A is None:
                A = np.zeros((0, n))
                b = np.zeros(0)
            else:
                A = np.atleast_2d(np.asarray(A, dtype=float))
                b = np.atleast_1d(np.asarray(b, dtype=float))
            if A.shape != (b.size, n):
                raise ValueError(f"{a_name} shape mismatch")
            object.__setattr__(self, a_name, A)
            object.__setattr__(self, b_name, b)

    @property
    def n(self) -> int:
        return self.g.size

    def objective(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(0.5 * x @ self.H @ x + self.g @ x)


def box_rows(n: int, lb=None, ub=None):
    """Inequality rows encoding lb <= x <= ub (None entries are skipped)."""
    rows, rhs = [], []
    eye = np.eye(n)
    if ub is not None:
        ub = np.broadcast_to(np.asarray(ub, dtype=float), (n,))
        for i in range(n):
            if np.isfinite(ub[i]):
                rows.append(eye[i])
                rhs.append(ub[i])
    if lb is not None:
        lb = np.broadcast_to(np.asarray(lb, dtype=float), (n,))
        for i in range(n):
            if np.isfinite(lb[i]):
                rows.append(-eye[i])
                rhs.append(-lb[i])
    if not rows:
        return np.zeros((0, n)), np.zeros(0)
    return np.array(rows), np.array(rhs)


def _phase1_point(qp: QuadraticProgram) -> np.ndarray:
    """Any feasible point, found with HiGHS (deterministic)."""
    from scipy.optimize import linprog

    res = linprog(
        c=np.zeros(qp.n),
        A_ub=qp.A_ineq if qp.A_ineq.size else None,
        b_ub=qp.b_ineq if qp.b_ineq.size else None,
        A_eq=qp.A_eq if qp.A_eq.size else None,
        b_eq=qp.b_eq if qp.b_eq.size else None,
        bounds=[(None, None)] * qp.n,
        method="highs",
    )
    if not res.success:
        raise InfeasibleProblemError(f"no feasible point: {res.message}")
    return np.asarray(res.x, dtype=float)


def _kkt_solve(H, g_vec, A):
    """Solve [H A'; A 0] [p; lam] = [-g_vec; 0] robustly."""
    n = g_vec.size
    m = A.shape[0]
    K = np.zeros((n + m, n + m))
    K[:n, :n] = H
    if m:
        K[:n, n:] = A.T
        K[n:, :n] = A
    rhs = np.concatenate([-g_vec, np.zeros(m)])
    try:
        sol = np.linalg.solve(K, rhs)
        if not np.all(np.isfinite(sol)) or np.linalg.norm(K @ sol - rhs) > 1e-6 * max(
            1.0, np.linalg.norm(rhs)
        ):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    return sol[:n], sol[n:]


def solve_qp(
    qp: QuadraticProgram,
    tol: float = 1e-8,
    x0: np.ndarray | None = None,
    max_iter: int | None = None,
) -> tuple[np.ndarray, float]:
    """Primal active-set method for a convex QP.

    Returns (x, objective).  x0, when given, must be feasible; otherwise a
    phase-1 LP provides a start.  Lowest-index tie-breaking everywhere keeps
    the method deterministic.
    """
    n = qp.n
    n_ineq = qp.A_ineq.shape[0]
    if max_iter is None:
        max_iter = 50 * (n + n_ineq + 1)
    if x0 is None:
        x = _phase1_point(qp)
    else:
        x = np.asarray(x0, dtype=float).copy()
        if qp.A_eq.size and np.max(np.abs(qp.A_eq @ x - qp.b_eq)) > 1e-7:
            raise ValueError("x0 violates equality constraints")
        if n_ineq and np.max(qp.A_ineq @ x - qp.b_ineq) > 1e-7:
            raise ValueError("x0 violates inequality constraints")

    act_tol = max(tol, 1e-10)
    slack = qp.b_ineq - qp.A_ineq @ x if n_ineq else np.zeros(0)
    working = [int(i) for i in np.nonzero(slack <= act_tol)[0]]

    for _ in range(max_iter):
        A_work = (
            np.vstack([qp.A_eq, qp.A_ineq[working]])
            if (qp.A_eq.size or working)
            else np.zeros((0, n))
        )
        grad = qp.H @ x + qp.g
        grad_scale = max(1.0, float(np.max(np.abs(grad), initial=0.0)))
        p, lam = _kkt_solve(qp.H, grad, A_work)

        # Stationary on the current working set: either the step vanishes or
        # its predicted decrease is at numerical-noise level for this
        # gradient scale.
        predicted = float(grad @ p + 0.5 * p @ qp.H @ p)
        x_scale = max(1.0, float(np.max(np.abs(x), initial=0.0)))
        stationary = (
            np.max(np.abs(p), initial=0.0) <= 1e-8 * x_scale
            or predicted >= -1e-9 * grad_scale * x_scale
        )
        if stationary:
            if not working:
                return x, qp.objective(x)
            mults = lam[qp.A_eq.shape[0] :]
            worst = int(np.argmin(mults))
            if mults[worst] >= -max(tol, 1e-10) * grad_scale:
                return x, qp.objective(x)
            del working[worst]
            continue

        # Step length to the nearest blocking constraint.
        alpha = 1.0
        blocking = -1
        if n_ineq:
            mask = np.ones(n_ineq, dtype=bool)
            mask[working] = False
            idx = np.nonzero(mask)[0]
            if idx.size:
                incr = qp.A_ineq[idx] @ p
                # Absolute threshold: spurious tiny positives produce huge
                # ratios and are never selected, while genuine blocking rows
                # must not be masked when the step itself is enormous
                # (near-singular KKT or regularized-LP directions).
                pos = incr > 1e-13
                if np.any(pos):
                    cand = idx[pos]
                    ratios = (qp.b_ineq[cand] - qp.A_ineq[cand] @ x) / incr[pos]
                    ratios = np.maximum(ratios, 0.0)
                    best = int(np.argmin(ratios))
                    if ratios[best] < alpha:
                        alpha = float(ratios[best])
                        blocking = int(cand[best])
        if alpha == 1.0 and blocking < 0:
            curvature = float(p @ qp.H @ p)
            descent = float(grad @ p)
            if curvature <= 1e-14 * max(1.0, abs(descent)) and descent < -1e-9:
                raise UnboundedProblemError("unbounded descent direction")
        x = x + alpha * p
        if blocking >= 0:
            working.append(blocking)
    raise SolverError(f"active-set method did not converge within {max_iter} iterations")


def solve_lp(
    c,
    A_ineq=None,
    b_ineq=None,
    A_eq=None,
    b_eq=None,
    x0=None,
    reg: float = LP_REGULARIZATION,
    tol: float = 1e-8,
) -> tuple[np.ndarray, float]:
    """LP solved as a regularized QP so the optimizer is unique and reproducible."""
    c = np.asarray(c, dtype=float)
    qp = QuadraticProgram(2.0 * reg * np.eye(c.size), c, A_ineq, b_ineq, A_eq, b_eq)
    x, _ = solve_qp(qp, tol=tol, x0=x0)
    return x, float(c @ x)


# ---------------------------------------------------------------------------
# Proximal bundle machinery


@dataclass(frozen=True)
class Cut:
    point: np.ndarray
    value: float
    subgrad: np.ndarray


@dataclass
class BundleState:
    cuts: list[Cut]
    center: np.ndarray
    center_value: float
    rho: float
    theta: float
    iteration: int = 0

    def model_value(self, p) -> float:
        p = np.asarray(p, dtype=float)
        return max(c.value + float(c.subgrad @ (p - c.point)) for c in self.cuts)


@dataclass(frozen=True)
class SimplexQPResult:
    weights: np.ndarray
    p_next: np.ndarray
    model_objective: float  # cutting-plane model + proximal term at p_next
    dual_objective: float


def solve_simplex_qp(cuts: list[Cut], rho: float, y) -> SimplexQPResult:
    """Proximal step via its simplex-constrained dual.

    The dual variables are convex-combination weights over the cuts; the new
    point is recovered as y - (1/rho) * sum_i xi_i * g_i.
    """
    if not cuts:
        raise ValueError("need at least one cut")
    if rho <= 0:
        raise ValueError("rho must be positive")
    y = np.asarray(y, dtype=float)
    G = np.array([c.subgrad for c in cuts])
    values = np.array([c.value for c in cuts])
    points = np.array([c.point for c in cuts])
    ell = len(cuts)

    # Cut values re-anchored at the proximal center.
    e = values + np.einsum("ij,ij->i", G, y[None, :] - points)
    H = (G @ G.T) / rho
    H = 0.5 * (H + H.T)
    # Normalize the objective scale (the argmin is invariant) and add a
    # whisker of curvature: H is rank deficient once cuts outnumber the
    # dimension, and both steps keep the KKT systems well behaved.
    scale = max(1.0, float(np.max(np.abs(H))), float(np.max(np.abs(e))))
    Hs = H / scale
    Hs[np.diag_indices(ell)] += 1e-12
    x0 = np.zeros(ell)
    x0[int(np.argmax(e))] = 1.0
    qp = QuadraticProgram(
        Hs,
        -e / scale,
        A_ineq=-np.eye(ell),
        b_ineq=np.zeros(ell),
        A_eq=np.ones((1, ell)),
        b_eq=np.ones(1),
    )
    xi, _ = solve_qp(qp, tol=1e-10, x0=x0)
    xi = np.maximum(xi, 0.0)
    xi /= xi.sum()

    p_next = y - (G.T @ xi) / rho
    model = float(np.max(values + np.einsum("ij,ij->i", G, p_next[None, :] - points)))
    model_obj = model + 0.5 * rho * float(np.sum((p_next - y) ** 2))
    dual_obj = float(e @ xi - (xi @ (G @ G.T) @ xi) / (2.0 * rho))
    return SimplexQPResult(weights=xi, p_next=p_next, model_objective=model_obj, dual_objective=dual_obj)


@dataclass(frozen=True)
class BundleParams:
    rho0: float = 1.0
    theta: float = 0.1
    tol_eta: float = 1e-6
    max_iter: int = 200
    max_cuts: int = 50
    rho_min: float = 1e-3
    rho_max: float = 1e6
    null_steps_before_growth: int = 5
    clamp_lo: np.ndarray | None = None
    clamp_hi: np.ndarray | None = None


@dataclass(frozen=True)
class BundleResult:
    point: np.ndarray
    value: float
    eta: float
    iterations: int
    serious_steps: int
    status: str  # "converged" | "max_iter" | "clamped"
    state: BundleState


def bundle_minimize(oracle, p0, params: BundleParams = BundleParams()) -> BundleResult:
    """Proximal bundle minimization of a convex nonsmooth function.

    ``oracle(p)`` must return (value, subgradient).  Stops once the model gap
    eta falls below tol_eta, the iteration budget runs out, or an iterate
    escapes the clamp box (a safeguard against objectives that are unbounded
    below; the final center is then clamped and flagged).
    """
    p0 = np.asarray(p0, dtype=float).copy()
    f0, g0 = oracle(p0)
    state = BundleState(
        cuts=[Cut(p0.copy(), float(f0), np.asarray(g0, dtype=float).copy())],
        center=p0,
        center_value=float(f0),
        rho=params.rho0,
        theta=params.theta,
    )
    eta = np.inf
    serious = 0
    null_run = 0
    status = "max_iter"

    for it in range(1, params.max_iter + 1):
        state.iteration = it
        step = solve_simplex_qp(state.cuts, state.rho, state.center)
        p_next = step.p_next

        clamped = False
        if params.clamp_lo is not None or params.clamp_hi is not None:
            lo = params.clamp_lo if params.clamp_lo is not None else -np.inf
            hi = params.clamp_hi if params.clamp_hi is not None else np.inf
            bounded = np.clip(p_next, lo, hi)
            if np.max(np.abs(bounded - p_next), initial=0.0) > 0:
                clamped = True
                p_next = bounded
                log.warning(
                    "bundle iterate escaped the safeguard box (objective likely "
                    "unbounded below for these multipliers); clamping and stopping"
                )

        if clamped:
            model_obj = state.model_value(p_next) + 0.5 * state.rho * float(
                np.sum((p_next - state.center) ** 2)
            )
        else:
            model_obj = step.model_objective
        eta = max(state.center_value - model_obj, 0.0)
        if not clamped and eta <= params.tol_eta:
            status = "converged"
            break

        f_new, g_new = oracle(p_next)
        new_cut = Cut(p_next.copy(), float(f_new), np.asarray(g_new, dtype=float).copy())
        duplicate = _is_duplicate_cut(state.cuts, new_cut)
        if not duplicate:
            if len(state.cuts) >= params.max_cuts:
                _aggregate_oldest(state, step.weights)
            state.cuts.append(new_cut)

        if state.center_value - f_new >= params.theta * eta:
            # Serious step.  Shrinking rho lengthens the stride, so marching
            # down a long linear stretch (where every new cut duplicates the
            # active plane) costs O(log) iterations instead of O(length).
            state.center = p_next.copy()
            state.center_value = float(f_new)
            serious += 1
            null_run = 0
            state.rho = max(state.rho / 2.0, params.rho_min)
        else:
            null_run += 1
            if duplicate or null_run >= params.null_steps_before_growth:
                # No new plane (or no progress): pull the trial point closer.
                state.rho = min(state.rho * 2.0, params.rho_max)
                if null_run >= params.null_steps_before_growth:
                    null_run = 0

        if clamped:
            status = "clamped"
            break

    return BundleResult(
        point=state.center.copy(),
        value=state.center_value,
        eta=float(eta),
        iterations=state.iteration,
        serious_steps=serious,
        status=status,
        state=state,
    )


def _is_duplicate_cut(cuts: list[Cut], new: Cut, tol: float = 1e-11) -> bool:
    """True when `new` describes an affine plane already in the bundle."""
    new_icept = new.value - float(new.subgrad @ new.point)
    for c in cuts:
        scale = max(1.0, float(np.max(np.abs(c.subgrad))), abs(c.value))
        if (
            np.max(np.abs(c.subgrad - new.subgrad), initial=0.0) <= tol * scale
            and abs((c.value - float(c.subgrad @ c.point)) - new_icept) <= tol * scale
        ):
            return True
    return False


def _aggregate_oldest(state: BundleState, weights: np.ndarray) -> None:
    """Merge the two oldest cuts into their weight-averaged aggregate.

    A convex combination of affine minorants is again a minorant, so the
    under-estimator property of the model survives the compression.
    """
    c0, c1 = state.cuts[0], state.cuts[1]
    w = np.array([weights[0], weights[1]])
    if w.sum() <= 1e-15:
        w = np.array([0.5, 0.5])
    w = w / w.sum()
    y = state.center
    val = sum(
        wi * (c.value + float(c.subgrad @ (y - c.point))) for wi, c in zip(w, (c0, c1))
    )
    grad = w[0] * c0.subgrad + w[1] * c1.subgrad
    state.cuts[:2] = [Cut(y.copy(), float(val), grad)]
