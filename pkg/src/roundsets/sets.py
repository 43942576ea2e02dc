"""Core set types.

A constrained convex generator set (:class:`Ccg`) is the affine image of a
product of norm balls sliced by linear equalities::

    {c + G @ beta : ||beta[J_i]||_{p_i} <= r_i for every group i,
                    A @ beta = b}

with ``G`` of shape ``(n, m)`` and ``A`` of shape ``(q, m)``. The index
groups ``J_i`` partition ``{1, ..., m}`` (stored 1-based), each with a norm
``p_i`` in ``{1, 2, inf}`` and a radius ``r_i`` in ``[0, 1]``.

A ring set (:class:`Rcg`) pairs an outer :class:`Ccg` with an inner one whose
covered points are excluded, carving a single hole. The same :class:`Ccg`
value serves both roles; only the inner role restricts radii to ``[0, 1)``.

Values are immutable once built: arrays are copied and marked read-only at
construction, and :func:`validate_ccg` / :func:`validate_rcg` check every
structural invariant without mutating anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NormError, PartitionError, RadiusError, ShapeError

ALLOWED_NORMS = (1.0, 2.0, math.inf)

_NORM_TOKENS = {"1": 1.0, "2": 2.0, "inf": math.inf}


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_vector(x, name: str) -> np.ndarray:
    """Coerce to a read-only 1-D float array (``None`` means empty)."""
    if x is None:
        x = ()
    try:
        v = np.array(x, dtype=float)
    except (TypeError, ValueError) as err:
        raise ShapeError(f"{name} is not numeric: {err}") from err
    if v.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional, got shape {v.shape}")
    return _freeze(v)


def as_matrix(x, name: str, ncols: Optional[int] = None) -> np.ndarray:
    """Coerce to a read-only 2-D float array.

    ``None`` or an empty list becomes a ``(0, ncols)`` matrix so
    constraint-free sets can be written as ``A=None`` or ``A=[]``.
    """
    if x is None or (isinstance(x, (list, tuple)) and len(x) == 0):
        if ncols is None:
            ncols = 0
        return _freeze(np.zeros((0, ncols)))
    try:
        m = np.array(x, dtype=float)
    except (TypeError, ValueError) as err:
        raise ShapeError(f"{name} is not a numeric matrix: {err}") from err
    if m.ndim == 1 and m.size == 0:
        m = m.reshape(0, ncols if ncols is not None else 0)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be two-dimensional, got shape {m.shape}")
    return _freeze(m)


@dataclass(frozen=True, eq=False)
class NormGroup:
    """One ball constraint: ``||beta[indices]||_p <= radius``.

    ``indices`` are 1-based, strictly increasing. ``radius`` is 1 in the
    ordinary (outer) role and may drop below 1 in the inner role of a ring
    set.
    """

    indices: tuple
    p: float
    radius: float = 1.0

    def __post_init__(self):
        try:
            idx = tuple(int(i) for i in self.indices)
        except (TypeError, ValueError) as err:
            raise ShapeError(f"group indices are not integers: {err}") from err
        p = self.p
        if isinstance(p, str):
            if p not in _NORM_TOKENS:
                raise NormError(f"unknown norm token {p!r}")
            p = _NORM_TOKENS[p]
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "p", float(p))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def indices0(self) -> np.ndarray:
        """0-based index array for numpy slicing."""
        return np.asarray(self.indices, dtype=int) - 1

    def __eq__(self, other):
        if not isinstance(other, NormGroup):
            return NotImplemented
        return (
            self.indices == other.indices
            and self.p == other.p
            and self.radius == other.radius
        )


@dataclass(frozen=True, eq=False)
class Ccg:
    """Constrained convex generator set ``<c, G, groups, A, b>``."""

    c: np.ndarray
    G: np.ndarray
    groups: tuple
    A: np.ndarray = ()
    b: np.ndarray = ()

    def __post_init__(self):
        c = as_vector(self.c, "c")
        G = as_matrix(self.G, "G")
        groups = tuple(
            g if isinstance(g, NormGroup) else NormGroup(**g) for g in self.groups
        )
        A = as_matrix(self.A, "A", ncols=G.shape[1])
        b = as_vector(self.b, "b")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        """Ambient dimension n."""
        return self.c.shape[0]

    @property
    def n_generators(self) -> int:
        """Number of coefficients m (columns of G)."""
        return self.G.shape[1]

    @property
    def n_constraints(self) -> int:
        """Number of equality rows q."""
        return self.A.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Ccg):
            return NotImplemented
        return (
            np.array_equal(self.c, other.c)
            and np.array_equal(self.G, other.G)
            and self.groups == other.groups
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.b, other.b)
        )


@dataclass(frozen=True, eq=False)
class Rcg:
    """Ring set: points of ``outer`` not covered by ``inner``.

    The hole is closed: a point the inner set covers, boundary included, is
    excluded from the ring set.
    """

    outer: Ccg
    inner: Ccg

    def __post_init__(self):
        if not isinstance(self.outer, Ccg) or not isinstance(self.inner, Ccg):
            raise ShapeError("Rcg members must be Ccg values")

    @property
    def dim(self) -> int:
        return self.outer.dim

    def __eq__(self, other):
        if not isinstance(other, Rcg):
            return NotImplemented
        return self.outer == other.outer and self.inner == other.inner


@dataclass(frozen=True, eq=False)
class Halfspace:
    """Closed halfspace ``{x : h @ x <= f}``."""

    h: np.ndarray
    f: float

    def __post_init__(self):
        h = as_vector(self.h, "h")
        if h.shape[0] == 0 or not np.any(h):
            raise ShapeError("halfspace normal must be a nonzero vector")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "f", float(self.f))

    @property
    def dim(self) -> int:
        return self.h.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Halfspace):
            return NotImplemented
        return np.array_equal(self.h, other.h) and self.f == other.f


@dataclass(frozen=True, eq=False)
class HalfspaceCut:
    """Outcome of cutting a Ccg with a halfspace.

    ``result`` is ``None`` exactly when the support bound certified the
    intersection empty (``d_max < 0``).
    """

    d_max: float
    result: Optional[Ccg]

    @property
    def is_empty(self) -> bool:
        return self.result is None


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A matrix acting on sets by ``x -> T @ x``."""

    T: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "T", as_matrix(self.T, "T"))

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return np.array_equal(self.T, other.T)


def validate_ccg(s: Ccg) -> Ccg:
    """Check every structural invariant of a Ccg; return it unchanged.

    Raises:
        ShapeError: row/column counts disagree.
        PartitionError: groups do not partition {1..m}.
        NormError: a group norm is not 1, 2 or inf.
        RadiusError: a group radius falls outside [0, 1].
    """
    if not isinstance(s, Ccg):
        raise ShapeError(f"expected a Ccg, got {type(s).__name__}")
    n, m = s.G.shape
    if s.c.shape[0] != n:
        raise ShapeError(f"c has length {s.c.shape[0]} but G has {n} rows")
    if n == 0:
        raise ShapeError("ambient dimension must be at least 1")
    if s.A.shape[1] != m:
        raise ShapeError(f"A has {s.A.shape[1]} columns but G has {m}")
    if s.b.shape[0] != s.A.shape[0]:
        raise ShapeError(f"b has length {s.b.shape[0]} but A has {s.A.shape[0]} rows")
    for arr, name in ((s.c, "c"), (s.G, "G"), (s.A, "A"), (s.b, "b")):
        if not np.all(np.isfinite(arr)):
            raise ShapeError(f"{name} contains non-finite entries")
    check_partition(s.groups, m)
    return s


def check_partition(groups: Sequence[NormGroup], m: int) -> None:
    """Verify norm groups partition 1..m with admissible norms and radii."""
    seen = []
    for g in groups:
        if len(g.indices) == 0:
            raise PartitionError("empty norm group")
        if any(i < 1 or i > m for i in g.indices):
            raise PartitionError(f"group indices {g.indices} outside 1..{m}")
        if any(b <= a for a, b in zip(g.indices, g.indices[1:])):
            raise PartitionError(f"group indices {g.indices} not strictly increasing")
        if g.p not in ALLOWED_NORMS:
            raise NormError(f"norm p={g.p} not supported (use 1, 2 or inf)")
        if not (0.0 <= g.radius <= 1.0) or not math.isfinite(g.radius):
            raise RadiusError(f"group radius {g.radius} outside [0, 1]")
        seen.extend(g.indices)
    if sorted(seen) != list(range(1, m + 1)):
        raise PartitionError(
            f"groups cover indices {sorted(seen)}, expected exactly 1..{m}"
        )


def validate_rcg(s: Rcg) -> Rcg:
    """Check both members, matching dimensions, and inner radii in [0, 1)."""
    if not isinstance(s, Rcg):
        raise ShapeError(f"expected an Rcg, got {type(s).__name__}")
    validate_ccg(s.outer)
    validate_ccg(s.inner)
    if s.outer.dim != s.inner.dim:
        raise ShapeError(
            f"outer dimension {s.outer.dim} != inner dimension {s.inner.dim}"
        )
    for g in s.inner.groups:
        if g.radius >= 1.0:
            raise RadiusError(f"inner group radius {g.radius} must lie in [0, 1)")
    return s


def single_group(m: int, p: float, radius: float = 1.0) -> tuple:
    """One group covering all of 1..m."""
    return (NormGroup(tuple(range(1, m + 1)), p, radius),)
