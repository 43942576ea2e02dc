"""Operations and constructors for ring sets.

A ring set combines with a plain convex generator set under linear maps,
Minkowski sums and intersections; the result stays a ring set with one
hole. Two ring sets do NOT combine: their sum or intersection can open
several holes, which this representation cannot hold, so those calls raise
:class:`UnsupportedOperation` rather than silently returning a wrong set.

Construction helpers cover the named families (all-ellipse, all-box with
equalities, plain box) plus structure probes: :func:`common_generator_form`
reports shared-generator / concentric simplifications, and
:func:`try_annulus_form` surfaces the closed-form membership layout the
solver also uses as its fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import ccg_ops
from .errors import NormError, ShapeError, UnsupportedOperation
from .feasibility import (
    DEFAULT_CONFIG,
    SolverConfig,
    _FEAS,
    _dykstra_batch,
    annulus_structure,
    _norms,
)
from .sets import Ccg, NormGroup, Rcg, single_group, validate_rcg

_TWO_RINGS_MSG = (
    "combining two ring sets is not supported: the result can open more than "
    "one hole, and this representation keeps exactly one"
)


def _require_rcg(s, name: str) -> Rcg:
    if not isinstance(s, Rcg):
        raise ShapeError(f"{name} must be an Rcg, got {type(s).__name__}")
    return s


def _require_plain_ccg(t, name: str) -> Ccg:
    if isinstance(t, Rcg):
        raise UnsupportedOperation(_TWO_RINGS_MSG)
    if not isinstance(t, Ccg):
        raise ShapeError(f"{name} must be a Ccg, got {type(t).__name__}")
    return t


def from_difference(outer: Ccg, inner: Ccg) -> Rcg:
    """Ring set covering ``outer`` minus every point ``inner`` covers."""
    return validate_rcg(Rcg(outer, inner))


def linear_map(T, s: Rcg) -> Rcg:
    """Map both members by ``x -> T x``.

    Faithful to the componentwise recipe, which matches the true image only
    for injective ``T``: a rank-deficient map can fold outer material over
    the hole, yet the mapped inner set stays carved out. The divergence
    suite quantifies this on a flattening projection.
    """
    _require_rcg(s, "s")
    return validate_rcg(Rcg(ccg_ops.linear_map(T, s.outer), ccg_ops.linear_map(T, s.inner)))


def minkowski_with_ccg(s: Rcg, t: Ccg) -> Rcg:
    """Minkowski sum of a ring set with a plain set.

    The outer member absorbs the summand; the exclusion clause turns out to
    depend on the summed point alone, so the stored inner member is
    unchanged. Note this is NOT the true set difference of the summed
    operands: material of the sum can re-cover the hole (small summands
    erode it, large ones fill it), which the divergence suite measures
    against directly sampled sums.
    """
    _require_rcg(s, "s")
    _require_plain_ccg(t, "t")
    return validate_rcg(Rcg(ccg_ops.minkowski(s.outer, t), s.inner))


def intersect_with_ccg(s: Rcg, t: Ccg) -> Rcg:
    """Intersection of a ring set with a plain set (exact).

    The outer member intersects exactly; points of the hole were never in
    the ring set, so carving the unchanged inner member from the smaller
    outer reproduces the set difference pointwise.
    """
    _require_rcg(s, "s")
    _require_plain_ccg(t, "t")
    return validate_rcg(Rcg(ccg_ops.intersect(s.outer, t), s.inner))


# ---------------------------------------------------------------------------
# constructors


def _norm_groups(m: int, p: float, groups, what: str) -> tuple:
    if groups is None:
        return single_group(m, p)
    out = []
    for g in groups:
        if isinstance(g, NormGroup):
            if g.p != p:
                raise NormError(f"{what} requires p={p}, got group with p={g.p}")
            out.append(g)
        else:
            out.append(NormGroup(tuple(g), p, 1.0))
    return tuple(out)


def _with_radii(groups: tuple, r) -> tuple:
    radii = np.atleast_1d(np.asarray(r, dtype=float))
    if radii.shape == (1,):
        radii = np.repeat(radii, len(groups))
    if radii.shape != (len(groups),):
        raise ShapeError(f"got {radii.shape[0]} radii for {len(groups)} inner groups")
    return tuple(
        NormGroup(g.indices, g.p, float(rad)) for g, rad in zip(groups, radii)
    )


def _ring(
    p: float,
    c_out,
    G_out,
    c_in,
    G_in,
    r,
    A_out,
    b_out,
    A_in,
    b_in,
    outer_groups,
    inner_groups,
) -> Rcg:
    outer = Ccg(c_out, G_out, (), A_out, b_out)
    inner = Ccg(c_in, G_in, (), A_in, b_in)
    outer = Ccg(
        outer.c,
        outer.G,
        _norm_groups(outer.n_generators, p, outer_groups, "outer"),
        outer.A,
        outer.b,
    )
    igroups = _with_radii(
        _norm_groups(inner.n_generators, p, inner_groups, "inner"), r
    )
    inner = Ccg(inner.c, inner.G, igroups, inner.A, inner.b)
    return validate_rcg(Rcg(outer, inner))


def roundabout_ellipsotope(
    c_out,
    G_out,
    c_in,
    G_in,
    r,
    *,
    A_out=(),
    b_out=(),
    A_in=(),
    b_in=(),
    outer_groups=None,
    inner_groups=None,
) -> Rcg:
    """Ring set whose every group uses the 2-norm.

    ``r`` gives the inner radii (scalar, or one value per inner group).
    Group arguments take 1-based index partitions, or NormGroup values whose
    ``p`` must already be 2 (anything else raises NormError).
    """
    return _ring(
        2.0, c_out, G_out, c_in, G_in, r, A_out, b_out, A_in, b_in, outer_groups, inner_groups
    )


def roundabout_constrained_zonotope(
    c_out,
    G_out,
    c_in,
    G_in,
    r,
    *,
    A_out=(),
    b_out=(),
    A_in=(),
    b_in=(),
    outer_groups=None,
    inner_groups=None,
) -> Rcg:
    """Ring set whose every group uses the inf norm, equalities allowed."""
    return _ring(
        math.inf, c_out, G_out, c_in, G_in, r, A_out, b_out, A_in, b_in, outer_groups, inner_groups
    )


def roundabout_zonotope(c_out, G_out, c_in, G_in, r) -> Rcg:
    """Plain ring zonotope: single inf group on each side, no equalities.

    The inner body is the box image scaled by ``r``: storing the unscaled
    ``G_in`` with group radius ``r`` covers the same points as scaling the
    generator columns by ``r`` against a unit ball, and keeps one canonical
    storage for both views.
    """
    return _ring(math.inf, c_out, G_out, c_in, G_in, r, (), (), (), (), None, None)


# ---------------------------------------------------------------------------
# structure probes


@dataclass(frozen=True)
class CommonGeneratorForm:
    """Shared-structure report for a ring set.

    ``shared_generators``: both members use one generator matrix, so the
    exclusion compares coefficients in a single frame. ``concentric``: the
    centers coincide and the offset term drops. ``matrix`` is the inner
    generator matrix of the exclusion equation ``matrix @ eta = offset +
    G_outer @ beta`` and ``offset`` is ``c_outer - c_inner``.
    """

    shared_generators: bool
    concentric: bool
    matrix: np.ndarray
    offset: np.ndarray


def common_generator_form(s: Rcg) -> Optional[CommonGeneratorForm]:
    """Report which exclusion simplifications apply, or None for neither."""
    _require_rcg(s, "s")
    shared = np.array_equal(s.outer.G, s.inner.G)
    concentric = np.array_equal(s.outer.c, s.inner.c)
    if not shared and not concentric:
        return None
    return CommonGeneratorForm(
        shared_generators=shared,
        concentric=concentric,
        matrix=s.inner.G,
        offset=s.outer.c - s.inner.c,
    )


@dataclass(frozen=True)
class AnnulusForm:
    """Closed-form ring membership: ``lower < ||beta|| and ||beta|| <= upper``.

    ``beta`` is the unique coefficient vector of a point (full column rank
    generator matrix shared by both members, one group each, no equalities).
    The two bounds may use different norms; with equal norms this is the
    classic annulus between radii ``lower`` and ``upper``.
    """

    c: np.ndarray
    G: np.ndarray
    p_outer: float
    p_inner: float
    lower: float
    upper: float
    pinv: np.ndarray

    def coefficients(self, x) -> np.ndarray:
        """Unique coefficient vector of ``x`` (least-squares preimage)."""
        return self.pinv @ (np.asarray(x, dtype=float) - self.c)

    def member(self, x, tol: float = DEFAULT_CONFIG.tol_feas) -> bool:
        x = np.asarray(x, dtype=float)
        beta = self.coefficients(x)
        lateral = float(np.linalg.norm(self.G @ beta - (x - self.c)))
        outer_n = float(_norms(beta[:, None], self.p_outer)[0])
        inner_n = float(_norms(beta[:, None], self.p_inner)[0])
        return lateral <= tol and outer_n <= self.upper + tol and inner_n > self.lower + tol


def try_annulus_form(s: Rcg) -> Optional[AnnulusForm]:
    """Closed-form layout when the ring is a concentric shared-frame pair.

    Conditions: equal centers, equal generator matrices of full column rank
    (smallest singular value above 1e-10 of the largest), no equalities, and
    one norm group per member over the same indices. Returns None otherwise;
    multi-group rings are excluded because per-group lower bounds would
    conjoin what is really an existential exclusion.
    """
    _require_rcg(s, "s")
    ann = annulus_structure(s)
    if ann is None:
        return None
    return AnnulusForm(
        c=ann.c,
        G=ann.G,
        p_outer=ann.p_outer,
        p_inner=ann.p_inner,
        lower=ann.lower,
        upper=ann.upper,
        pinv=ann.pinv,
    )


# ---------------------------------------------------------------------------
# ring zonotope // zonotope intersection


@dataclass(frozen=True)
class RzParamRegion:
    """Coefficient-space view of a ring zonotope cut by a zonotope.

    A coefficient vector ``beta`` is admissible when it lies in the ring
    shell (``lower < ||beta||_inf <= upper``) and the coupled system
    ``G_y @ gamma = G @ beta - offset`` with ``||gamma||_inf <= 1`` is
    solvable; ``offset = c_y - c``.
    """

    G: np.ndarray
    G_y: np.ndarray
    offset: np.ndarray
    lower: float
    upper: float
    y_groups: tuple

    def contains(self, betas, cfg: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
        """Vectorized admissibility over an (m, N) array of coefficients."""
        betas = np.atleast_2d(np.asarray(betas, dtype=float))
        if betas.shape[0] != self.G.shape[1]:
            betas = betas.T
        if betas.shape[0] != self.G.shape[1]:
            raise ShapeError(f"betas must be ({self.G.shape[1]}, N)")
        nrm = np.abs(betas).max(axis=0)
        shell = (nrm > self.lower + cfg.tol_feas) & (nrm <= self.upper + cfg.tol_feas)
        rhs = self.G @ betas - self.offset[:, None]
        status, _, _, _ = _dykstra_batch(
            self.G_y, rhs, self.y_groups, self.G_y.shape[1], cfg
        )
        return shell & (status == _FEAS)


@dataclass(frozen=True)
class RzIntersection:
    """Result of cutting a ring zonotope with a zonotope.

    ``result`` is the exact ring set; ``param_region`` is the closed-frame
    coefficient view, present when the ring is concentric with one shared
    full-rank generator matrix.
    """

    result: Rcg
    param_region: Optional[RzParamRegion]


def rz_intersect_zonotope(s: Rcg, y: Ccg) -> RzIntersection:
    """Specialize :func:`intersect_with_ccg` to plain ring zonotopes.

    Every group of ``s`` and ``y`` must use the inf norm (NormError
    otherwise) and no operand may carry equality constraints.
    """
    _require_rcg(s, "s")
    _require_plain_ccg(y, "y")
    for part, name in ((s.outer, "outer"), (s.inner, "inner"), (y, "y")):
        for g in part.groups:
            if g.p != math.inf:
                raise NormError(f"{name} group with p={g.p}: rz intersection needs inf norms")
        if part.n_constraints:
            raise UnsupportedOperation(
                f"rz intersection needs plain zonotopes, {name} carries equalities"
            )
    result = intersect_with_ccg(s, y)
    region = None
    ann = annulus_structure(s)
    if ann is not None:
        region = RzParamRegion(
            G=ann.G,
            G_y=y.G,
            offset=y.c - s.outer.c,
            lower=ann.lower,
            upper=ann.upper,
            y_groups=y.groups,
        )
    return RzIntersection(result, region)
