"""Exact closed-form operations on constrained convex generator sets.

Each operation returns a new validated :class:`Ccg` whose coefficient
structure encodes the result without approximation: Minkowski sums
concatenate generators, intersections couple two coefficient blocks through
equality rows, and halfspace cuts add one slack generator. Nothing here
iterates or solves; membership questions about the results go through
:mod:`roundsets.feasibility`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ShapeError
from .sets import Ccg, Halfspace, HalfspaceCut, LinearMap, NormGroup, validate_ccg

MapLike = Union[LinearMap, np.ndarray, list]


def _map_matrix(T: MapLike, n: int) -> np.ndarray:
    M = T.T if isinstance(T, LinearMap) else np.asarray(T, dtype=float)
    if M.ndim != 2:
        raise ShapeError(f"map matrix must be 2-D, got shape {M.shape}")
    if M.shape[1] != n:
        raise ShapeError(f"map matrix has {M.shape[1]} columns, set dimension is {n}")
    return M


def _require_ccg(s, name: str) -> Ccg:
    if not isinstance(s, Ccg):
        raise ShapeError(f"{name} must be a Ccg, got {type(s).__name__}")
    return s


def shift_groups(groups, offset: int) -> tuple:
    """Re-index groups after their coefficients move right by ``offset``."""
    return tuple(
        NormGroup(tuple(i + offset for i in g.indices), g.p, g.radius) for g in groups
    )


def linear_map(T: MapLike, s: Ccg) -> Ccg:
    """Image ``{T x : x in s}``: maps the center and generators, keeps the rest."""
    _require_ccg(s, "s")
    M = _map_matrix(T, s.dim)
    return validate_ccg(Ccg(M @ s.c, M @ s.G, s.groups, s.A, s.b))


def minkowski(s1: Ccg, s2: Ccg) -> Ccg:
    """Minkowski sum ``{x + y : x in s1, y in s2}``.

    Centers add, generator blocks concatenate, and the equality systems sit
    on a block diagonal so the two coefficient blocks stay independent.
    """
    _require_ccg(s1, "s1")
    _require_ccg(s2, "s2")
    if s1.dim != s2.dim:
        raise ShapeError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    m1, m2 = s1.n_generators, s2.n_generators
    q1, q2 = s1.n_constraints, s2.n_constraints
    A = np.zeros((q1 + q2, m1 + m2))
    A[:q1, :m1] = s1.A
    A[q1:, m1:] = s2.A
    return validate_ccg(
        Ccg(
            s1.c + s2.c,
            np.hstack([s1.G, s2.G]),
            s1.groups + shift_groups(s2.groups, m1),
            A,
            np.concatenate([s1.b, s2.b]),
        )
    )


def intersect(s1: Ccg, s2: Ccg) -> Ccg:
    """Intersection ``s1 & s2`` via coefficient coupling.

    The result reuses s1's frame (``x = c1 + G1 beta``) and appends s2's
    coefficients as inert columns; the rows ``G1 beta - G2 gamma = c2 - c1``
    force both frames to describe the same point.
    """
    _require_ccg(s1, "s1")
    _require_ccg(s2, "s2")
    if s1.dim != s2.dim:
        raise ShapeError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    n = s1.dim
    m1, m2 = s1.n_generators, s2.n_generators
    q1, q2 = s1.n_constraints, s2.n_constraints
    G = np.hstack([s1.G, np.zeros((n, m2))])
    A = np.zeros((q1 + q2 + n, m1 + m2))
    A[:q1, :m1] = s1.A
    A[q1 : q1 + q2, m1:] = s2.A
    A[q1 + q2 :, :m1] = s1.G
    A[q1 + q2 :, m1:] = -s2.G
    b = np.concatenate([s1.b, s2.b, s2.c - s1.c])
    return validate_ccg(Ccg(s1.c, G, s1.groups + shift_groups(s2.groups, m1), A, b))


@dataclass(frozen=True)
class SupportBound:
    """Upper bound on ``max h @ x`` over a set (exact for pure zonotopes)."""

    value: float


def support_upper_bound(h, s: Ccg) -> SupportBound:
    """Bound ``h @ x`` from above by ``h @ c + sum_j |h @ g_j|``.

    Equalities and non-inf groups only shrink the set, so this stays an
    upper bound; it is tight when there are no equalities and every group
    uses the inf norm with radius 1.
    """
    _require_ccg(s, "s")
    h = np.asarray(h, dtype=float)
    if h.shape != (s.dim,):
        raise ShapeError(f"h has shape {h.shape}, set dimension is {s.dim}")
    return SupportBound(float(h @ s.c + np.abs(h @ s.G).sum()))


def _augmented_halfspace(s: Ccg, hs: Halfspace, d_max: float) -> Ccg:
    # one slack generator turns h@x <= f into an equality:
    # h@x = f - (d_max/2) * (1 + beta_slack), with |beta_slack| <= 1
    m = s.n_generators
    q = s.n_constraints
    G = np.hstack([s.G, np.zeros((s.dim, 1))])
    groups = s.groups + (NormGroup((m + 1,), float("inf"), 1.0),)
    A = np.zeros((q + 1, m + 1))
    A[:q, :m] = s.A
    A[q, :m] = hs.h @ s.G
    A[q, m] = d_max / 2.0
    b = np.concatenate([s.b, [hs.f - hs.h @ s.c - d_max / 2.0]])
    return Ccg(s.c, G, groups, A, b)


def halfspace_cut(s: Ccg, hs: Halfspace) -> HalfspaceCut:
    """Intersect with ``{x : h @ x <= f}``.

    ``d_max = f - h @ c + sum_j |h @ g_j|`` measures how deep the halfspace
    reaches past the set's farthest point against ``h``. A negative value
    certifies an empty intersection (sufficient, not necessary, since the
    support bound can overshoot on constrained sets); otherwise the cut is
    exact.
    """
    _require_ccg(s, "s")
    if not isinstance(hs, Halfspace):
        raise ShapeError(f"hs must be a Halfspace, got {type(hs).__name__}")
    if hs.dim != s.dim:
        raise ShapeError(f"halfspace dimension {hs.dim} != set dimension {s.dim}")
    d_max = float(hs.f - hs.h @ s.c + np.abs(hs.h @ s.G).sum())
    if d_max < 0.0:
        return HalfspaceCut(d_max, None)
    return HalfspaceCut(d_max, validate_ccg(_augmented_halfspace(s, hs, d_max)))
