"""Membership and emptiness decisions via alternating projections.

Every decision here reduces to one primitive: does a point exist on an
affine flat ``{beta : A beta = b}`` and inside a product of norm balls?
Both pieces admit exact Euclidean projections, so a two-set Dykstra scheme
settles the question without an external solver. When the sets meet, the
iterates converge to a common point; when they do not, the gap between the
two projection tracks converges to the (positive) minimal distance, which
serves as an infeasibility certificate once it stabilizes above
``tol_infeas``. Anything in between is reported honestly as indeterminate.

The batch entry points run many right-hand sides in lockstep with per-column
stopping, which is what makes dense rasters affordable; the scalar API is
the single-column case of the same code path, so verdicts are deterministic
for fixed inputs and configuration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import AffineInfeasible, NormError, RadiusError, ShapeError
from .sets import ALLOWED_NORMS, Ccg, NormGroup, Rcg, as_matrix, as_vector, check_partition


class Status(enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    INDETERMINATE = "Indeterminate"


# integer codes used by the batched kernel
_RUNNING, _FEAS, _INFEAS, _INDET = 0, 1, 2, 3

_CODE_TO_STATUS = {_FEAS: Status.FEASIBLE, _INFEAS: Status.INFEASIBLE, _INDET: Status.INDETERMINATE}


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and iteration limits for the feasibility engine.

    ``tol_feas`` bounds the accepted constraint violation of a witness;
    ``tol_infeas`` is the smallest stabilized gap treated as a proof of
    infeasibility; gaps between the two yield ``Indeterminate``. A residual
    is considered stabilized when it varies by less than ``stall_rtol``
    (relatively) across ``stall_window`` consecutive iterations.
    ``force_general`` disables closed-form membership shortcuts so the
    general solver can be differentially tested against them.
    """

    tol_feas: float = 1e-7
    tol_infeas: float = 1e-6
    max_iter: int = 5000
    stall_window: int = 50
    stall_rtol: float = 1e-10
    force_general: bool = False

    def __post_init__(self):
        if not (0 < self.tol_feas <= self.tol_infeas):
            raise ValueError("need 0 < tol_feas <= tol_infeas")
        if self.max_iter < 1 or self.stall_window < 2:
            raise ValueError("max_iter and stall_window must be positive")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class FeasibilityProblem:
    """Find ``beta`` with ``A beta = b`` and every group ball satisfied."""

    affine_A: np.ndarray
    affine_b: np.ndarray
    groups: tuple
    dim: int

    def __post_init__(self):
        A = as_matrix(self.affine_A, "affine_A", ncols=self.dim)
        b = as_vector(self.affine_b, "affine_b")
        if A.shape[1] != self.dim:
            raise ShapeError(f"affine_A has {A.shape[1]} columns, expected {self.dim}")
        if b.shape[0] != A.shape[0]:
            raise ShapeError("affine_b length does not match affine_A rows")
        groups = tuple(self.groups)
        check_partition(groups, self.dim)
        object.__setattr__(self, "affine_A", A)
        object.__setattr__(self, "affine_b", b)
        object.__setattr__(self, "groups", groups)


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of a feasibility run.

    ``witness`` is present exactly for feasible verdicts and satisfies the
    equalities to machine precision and every ball within ``tol_feas``.
    ``residual`` is the final Euclidean gap between the affine track and the
    ball track (``inf`` when the equalities alone are inconsistent).
    """

    status: Status
    witness: Optional[np.ndarray]
    residual: float
    iterations: int


class BatchVerdict(NamedTuple):
    """Columnwise statuses for a batched run (codes 1/2/3, see Status)."""

    status: np.ndarray
    residual: np.ndarray
    iterations: np.ndarray


# ---------------------------------------------------------------------------
# ball projections


def _norms(V: np.ndarray, p: float) -> np.ndarray:
    if p == 1.0:
        return np.abs(V).sum(axis=0)
    if p == 2.0:
        return np.sqrt((V * V).sum(axis=0))
    return np.abs(V).max(axis=0)


def _project_l1_cols(V: np.ndarray, r: float) -> np.ndarray:
    """Columnwise projection onto the l1 ball of radius r (sort-threshold)."""
    if r <= 0.0:
        return np.zeros_like(V)
    W = V.copy()
    over = np.abs(V).sum(axis=0) > r
    if not over.any():
        return W
    sub = np.abs(V[:, over])
    d = V.shape[0]
    U = -np.sort(-sub, axis=0)
    css = np.cumsum(U, axis=0)
    ks = np.arange(1, d + 1, dtype=float)[:, None]
    # rho >= 1 holds in exact arithmetic; rounding can miss it when r is
    # below the ulp of the leading entry, so clamp before dividing
    rho = np.maximum(((U - (css - r) / ks) > 0).sum(axis=0), 1)
    theta = (css[rho - 1, np.arange(sub.shape[1])] - r) / rho
    W[:, over] = np.sign(V[:, over]) * np.maximum(sub - theta, 0.0)
    return W


def _project_cols(V: np.ndarray, p: float, r: float) -> np.ndarray:
    if p == math.inf:
        return np.clip(V, -r, r)
    if p == 2.0:
        nrm = np.sqrt((V * V).sum(axis=0))
        scale = np.ones_like(nrm)
        mask = nrm > r
        scale[mask] = r / nrm[mask]
        return V * scale
    return _project_l1_cols(V, r)


def _group_data(groups: Sequence[NormGroup], slack: float) -> list:
    # radii are shifted by `slack` (floored at 0) for band-stability probes
    return [(g.indices0, g.p, max(g.radius + slack, 0.0)) for g in groups]


def _project_balls(X: np.ndarray, gdata: list) -> np.ndarray:
    Y = np.empty_like(X)
    for idx, p, r in gdata:
        Y[idx] = _project_cols(X[idx], p, r)
    return Y


def _ball_violation(X: np.ndarray, gdata: list) -> np.ndarray:
    worst = np.full(X.shape[1], -np.inf)
    for idx, p, r in gdata:
        np.maximum(worst, _norms(X[idx], p) - r, out=worst)
    return worst


def project_ball(v, p: float, radius: float) -> np.ndarray:
    """Exact Euclidean projection of ``v`` onto ``{u : ||u||_p <= radius}``.

    Closed forms: coordinate clamp for ``p = inf``, radial scaling for
    ``p = 2``, and the sorted-threshold construction for ``p = 1``.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ShapeError(f"v must be a vector, got shape {v.shape}")
    if float(p) not in ALLOWED_NORMS:
        raise NormError(f"norm p={p} not supported (use 1, 2 or inf)")
    radius = float(radius)
    if not (radius >= 0.0) or not math.isfinite(radius):
        raise RadiusError(f"radius must be finite and nonnegative, got {radius}")
    return _project_cols(v[:, None].astype(float), float(p), radius)[:, 0]


def project_affine(v, A, b, tol: float = DEFAULT_CONFIG.tol_feas) -> np.ndarray:
    """Exact Euclidean projection of ``v`` onto ``{x : A x = b}``.

    Raises AffineInfeasible when the system has no solution, i.e. the
    least-squares residual of the minimum-norm solution exceeds ``tol``.
    """
    v = np.asarray(v, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or v.ndim != 1 or A.shape[1] != v.shape[0]:
        raise ShapeError("A must be (q, len(v))")
    if b.shape != (A.shape[0],):
        raise ShapeError("b must have one entry per row of A")
    if A.shape[0] == 0:
        return v.copy()
    pinvA = np.linalg.pinv(A)
    gap = float(np.linalg.norm(A @ (pinvA @ b) - b))
    if gap > tol:
        raise AffineInfeasible(f"equalities inconsistent (residual {gap:.3e})")
    return v - pinvA @ (A @ v - b)


# ---------------------------------------------------------------------------
# the batched Dykstra kernel


def _dykstra_batch(
    A: np.ndarray,
    B: np.ndarray,
    groups: Sequence[NormGroup],
    m: int,
    cfg: SolverConfig,
    slack: float = 0.0,
    want_witness: bool = False,
):
    """Decide feasibility for every column b of B against a shared A.

    Returns (status, residual, iterations, witness); witness is an (m, N)
    array holding coefficient vectors for feasible columns (zeros elsewhere)
    and is only populated when ``want_witness`` is set.
    """
    q, N = A.shape[0], B.shape[1]
    status = np.full(N, _RUNNING, dtype=np.int8)
    resid = np.zeros(N)
    iters = np.zeros(N, dtype=int)
    wit = np.zeros((m, N)) if want_witness else None

    if m == 0:
        gap = np.linalg.norm(B, axis=0) if q else np.zeros(N)
        feas = gap <= cfg.tol_feas
        status[:] = np.where(feas, _FEAS, _INFEAS)
        resid[:] = np.where(feas, gap, np.inf)
        return status, resid, iters, wit

    gdata = _group_data(groups, slack)

    if q == 0:
        # the zero vector lies in every ball
        status[:] = _FEAS
        return status, resid, iters, wit

    pinvA = np.linalg.pinv(A)
    X = pinvA @ B
    ls_gap = np.linalg.norm(A @ X - B, axis=0)
    bad = ls_gap > cfg.tol_feas
    status[bad] = _INFEAS
    resid[bad] = np.inf

    live = np.flatnonzero(~bad)
    if live.size == 0:
        return status, resid, iters, wit
    X = X[:, live].copy()
    Bl = B[:, live]
    P = np.zeros_like(X)
    Q = np.zeros_like(X)
    W = cfg.stall_window
    hist = np.full((W + 1, live.size), np.nan)
    res = np.zeros(live.size)

    for k in range(1, cfg.max_iter + 1):
        # X is affine-exact; accept it as soon as the balls are met
        viol = _ball_violation(X, gdata)
        ok = viol <= cfg.tol_feas
        if ok.any():
            cols = live[ok]
            status[cols] = _FEAS
            resid[cols] = np.linalg.norm(X[:, ok] - _project_balls(X[:, ok], gdata), axis=0)
            iters[cols] = k - 1
            if want_witness:
                wit[:, cols] = X[:, ok]
            keep = ~ok
            X, P, Q, Bl = X[:, keep], P[:, keep], Q[:, keep], Bl[:, keep]
            hist = hist[:, keep]
            live = live[keep]
            if live.size == 0:
                break

        Ys = X + P
        Y = _project_balls(Ys, gdata)
        P = Ys - Y
        Xs = Y + Q
        X = Xs - pinvA @ (A @ Xs - Bl)
        Q = Xs - X
        res = np.linalg.norm(X - Y, axis=0)

        hist[k % (W + 1)] = res
        if k > W:
            spread = hist.max(axis=0) - hist.min(axis=0)
            stalled = spread <= cfg.stall_rtol * np.maximum(res, 1e-300)
            # a stalled gap at or below tol_feas may still pass the witness
            # check above, so only gaps beyond it are classified here
            decided = stalled & (res > cfg.tol_feas)
            if decided.any():
                infeas = decided & (res > cfg.tol_infeas)
                cols_inf = live[infeas]
                status[cols_inf] = _INFEAS
                resid[cols_inf] = res[infeas]
                iters[cols_inf] = k
                indet = decided & ~infeas
                cols_ind = live[indet]
                status[cols_ind] = _INDET
                resid[cols_ind] = res[indet]
                iters[cols_ind] = k
                keep = ~decided
                X, P, Q, Bl = X[:, keep], P[:, keep], Q[:, keep], Bl[:, keep]
                hist = hist[:, keep]
                res = res[keep]
                live = live[keep]
                if live.size == 0:
                    break

    if live.size:
        status[live] = _INDET
        resid[live] = res
        iters[live] = cfg.max_iter
    return status, resid, iters, wit


def solve_feasibility(
    prob: FeasibilityProblem, cfg: SolverConfig = DEFAULT_CONFIG
) -> FeasibilityVerdict:
    """Decide one feasibility problem; see the module docstring.

    The start point is the minimum-norm solution of the equalities, so
    identical inputs and configuration reproduce identical verdicts.
    """
    status, resid, iters, wit = _dykstra_batch(
        prob.affine_A,
        prob.affine_b[:, None],
        prob.groups,
        prob.dim,
        cfg,
        want_witness=True,
    )
    code = int(status[0])
    witness = None
    if code == _FEAS:
        witness = wit[:, 0].copy()
        witness.setflags(write=False)
    return FeasibilityVerdict(_CODE_TO_STATUS[code], witness, float(resid[0]), int(iters[0]))


# ---------------------------------------------------------------------------
# membership / emptiness over sets


def membership_problem(x, s: Ccg) -> FeasibilityProblem:
    """Stack ``A beta = b`` with ``G beta = x - c`` for a membership query."""
    x = np.asarray(x, dtype=float)
    if x.shape != (s.dim,):
        raise ShapeError(f"point has shape {x.shape}, set dimension is {s.dim}")
    A = np.vstack([s.A, s.G])
    b = np.concatenate([s.b, x - s.c])
    return FeasibilityProblem(A, b, s.groups, s.n_generators)


def emptiness_problem(s: Ccg) -> FeasibilityProblem:
    return FeasibilityProblem(s.A, s.b, s.groups, s.n_generators)


def ccg_member(x, s: Ccg, cfg: SolverConfig = DEFAULT_CONFIG) -> FeasibilityVerdict:
    """Decide ``x in s``. Feasible means member."""
    return solve_feasibility(membership_problem(x, s), cfg)


def ccg_empty(s: Ccg, cfg: SolverConfig = DEFAULT_CONFIG) -> FeasibilityVerdict:
    """Decide whether the set covers any point at all.

    Feasible means NONempty (some admissible coefficient vector exists);
    Infeasible certifies emptiness.
    """
    return solve_feasibility(emptiness_problem(s), cfg)


def ccg_member_batch(
    points: np.ndarray, s: Ccg, cfg: SolverConfig = DEFAULT_CONFIG, slack: float = 0.0
) -> BatchVerdict:
    """Columnwise membership for an (n, N) array of points.

    ``slack`` shifts every ball radius (positive widens the set, negative
    shrinks it); raster banding probes decision stability with it.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] != s.dim:
        raise ShapeError(f"points must be ({s.dim}, N), got {points.shape}")
    q, n = s.n_constraints, s.dim
    B = np.empty((q + n, points.shape[1]))
    B[:q] = s.b[:, None]
    B[q:] = points - s.c[:, None]
    A = np.vstack([s.A, s.G])
    status, resid, iters, _ = _dykstra_batch(A, B, s.groups, s.n_generators, cfg, slack)
    return BatchVerdict(status, resid, iters)


def rcg_member_batch(
    points: np.ndarray, s: Rcg, cfg: SolverConfig = DEFAULT_CONFIG, slack: float = 0.0
) -> BatchVerdict:
    """Columnwise ring-set membership: outer feasible AND inner infeasible.

    ``slack`` widens the outer balls and shrinks the inner ones by the same
    amount (both changes enlarge the ring set), so +/- slack brackets the
    nominal decision.
    """
    ann = annulus_structure(s)
    if ann is not None and not cfg.force_general:
        member, indet, margin = _annulus_decide(ann, np.asarray(points, float), cfg, slack)
        status = np.where(member, _FEAS, _INFEAS).astype(np.int8)
        status[indet] = _INDET
        return BatchVerdict(status, margin, np.zeros(points.shape[1], dtype=int))
    o = ccg_member_batch(points, s.outer, cfg, slack)
    i = ccg_member_batch(points, s.inner, cfg, -slack)
    member = (o.status == _FEAS) & (i.status == _INFEAS)
    indet = (o.status == _INDET) | ((o.status == _FEAS) & (i.status == _INDET))
    status = np.where(member, _FEAS, _INFEAS).astype(np.int8)
    status[indet] = _INDET
    resid = np.where(o.status == _FEAS, i.residual, o.residual)
    return BatchVerdict(status, resid, o.iterations + i.iterations)


def rcg_member(x, s: Rcg, cfg: SolverConfig = DEFAULT_CONFIG) -> FeasibilityVerdict:
    """Decide ``x in s`` for a ring set.

    Membership requires the outer set to cover ``x`` and the inner set
    (hole) to provably NOT cover it; the hole is treated as closed. When the
    concentric shared-generator shortcut applies it is used automatically
    unless ``cfg.force_general`` is set.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (s.dim,):
        raise ShapeError(f"point has shape {x.shape}, set dimension is {s.dim}")
    ann = annulus_structure(s)
    if ann is not None and not cfg.force_general:
        return _annulus_verdict(ann, x, cfg)
    outer = ccg_member(x, s.outer, cfg)
    if outer.status is not Status.FEASIBLE:
        return FeasibilityVerdict(outer.status, None, outer.residual, outer.iterations)
    inner = ccg_member(x, s.inner, cfg)
    total = outer.iterations + inner.iterations
    if inner.status is Status.INFEASIBLE:
        return FeasibilityVerdict(Status.FEASIBLE, outer.witness, outer.residual, total)
    if inner.status is Status.FEASIBLE:
        # the point sits in the hole
        return FeasibilityVerdict(Status.INFEASIBLE, None, inner.residual, total)
    return FeasibilityVerdict(Status.INDETERMINATE, None, inner.residual, total)


# ---------------------------------------------------------------------------
# concentric shared-generator shortcut
#
# When outer and inner share one center, one generator matrix of full column
# rank, no equalities, and a single group each, the coefficient vector of a
# point is unique and membership reduces to two norm comparisons:
# lower < ||beta||_(inner p) and ||beta||_(outer p) <= upper.


@dataclass(frozen=True)
class _AnnulusStructure:
    c: np.ndarray
    G: np.ndarray
    pinv: np.ndarray
    p_outer: float
    p_inner: float
    upper: float
    lower: float


_RANK_RTOL = 1e-10


def annulus_structure(s: Rcg) -> Optional[_AnnulusStructure]:
    """Detect the closed-form ring layout, or None.

    Requires concentric members, identical generator matrices of full column
    rank (smallest singular value above 1e-10 of the largest), no equality
    constraints, and a single norm group on each side covering the same
    indices. Multi-group rings stay on the general solver: per-group lower
    bounds would describe a smaller set than the actual exclusion.
    """
    o, i = s.outer, s.inner
    if len(o.groups) != 1 or len(i.groups) != 1:
        return None
    if o.n_constraints or i.n_constraints:
        return None
    if not (np.array_equal(o.c, i.c) and np.array_equal(o.G, i.G)):
        return None
    og, ig = o.groups[0], i.groups[0]
    if og.indices != ig.indices or o.n_generators == 0:
        return None
    sv = np.linalg.svd(o.G, compute_uv=False)
    if sv[-1] <= _RANK_RTOL * sv[0]:
        return None
    return _AnnulusStructure(
        c=o.c,
        G=o.G,
        pinv=np.linalg.pinv(o.G),
        p_outer=og.p,
        p_inner=ig.p,
        upper=og.radius,
        lower=ig.radius,
    )


def _annulus_decide(ann: _AnnulusStructure, points: np.ndarray, cfg: SolverConfig, slack: float):
    """Vectorized closed-form ring membership; returns (member, indet, margin)."""
    D = points - ann.c[:, None]
    Beta = ann.pinv @ D
    lateral = np.linalg.norm(ann.G @ Beta - D, axis=0)
    outer_n = _norms(Beta, ann.p_outer)
    inner_n = _norms(Beta, ann.p_inner)
    on_flat = lateral <= cfg.tol_feas
    in_outer = outer_n <= ann.upper + slack + cfg.tol_feas
    in_hole = inner_n <= max(ann.lower - slack, 0.0) + cfg.tol_feas
    member = on_flat & in_outer & ~in_hole
    indet = np.zeros(points.shape[1], dtype=bool)
    margin = np.maximum.reduce(
        [lateral, outer_n - (ann.upper + slack), (ann.lower - slack) - inner_n]
    )
    return member, indet, np.abs(margin)


def _annulus_verdict(ann: _AnnulusStructure, x: np.ndarray, cfg: SolverConfig) -> FeasibilityVerdict:
    d = x - ann.c
    beta = ann.pinv @ d
    lateral = float(np.linalg.norm(ann.G @ beta - d))
    outer_n = float(_norms(beta[:, None], ann.p_outer)[0])
    inner_n = float(_norms(beta[:, None], ann.p_inner)[0])
    if (
        lateral <= cfg.tol_feas
        and outer_n <= ann.upper + cfg.tol_feas
        and inner_n > ann.lower + cfg.tol_feas
    ):
        beta = beta.copy()
        beta.setflags(write=False)
        # violation of the witness, not its distance to either boundary
        residual = max(lateral, outer_n - ann.upper, 0.0)
        return FeasibilityVerdict(Status.FEASIBLE, beta, residual, 0)
    margin = max(lateral, outer_n - ann.upper, ann.lower - inner_n)
    return FeasibilityVerdict(Status.INFEASIBLE, None, abs(margin), 0)
