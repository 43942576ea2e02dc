"""Brute-force ground truth: dense rasters, rejection sampling, comparisons.

The raster oracle evaluates membership at every cell center of a fixed 2-D
grid, entirely independent of how the queried set was constructed, so two
construction routes for the same region can be compared cell by cell.
Each cell also carries a band flag marking decisions that are not stable
at the working tolerance; comparisons count off-band disagreements only,
which is the acceptance metric used throughout the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DimensionError, SamplingExhausted, ShapeError
from .feasibility import (
    DEFAULT_CONFIG,
    SolverConfig,
    _FEAS,
    _INDET,
    _INFEAS,
    _ball_violation,
    _group_data,
    ccg_member_batch,
    rcg_member_batch,
)
from .sets import Ccg, Rcg

SetLike = Union[Ccg, Rcg]


@dataclass(frozen=True, eq=False)
class RasterGrid:
    """Membership bitmap over a bounding box.

    ``bits[i, j]`` answers for the center of cell (i, j), rows running from
    ``ymin`` (row 0) upward, columns from ``xmin``. ``band[i, j]`` marks
    cells whose decision flips within the tolerance band; banded cells are
    stored undecided (``bits`` false) so the two planes never overlap.
    """

    bbox: tuple
    nx: int
    ny: int
    bits: np.ndarray
    band: np.ndarray

    def __post_init__(self):
        bbox = tuple(float(v) for v in self.bbox)
        if len(bbox) != 4 or not all(np.isfinite(bbox)):
            raise ShapeError("bbox must be four finite floats (xmin, xmax, ymin, ymax)")
        if bbox[0] >= bbox[1] or bbox[2] >= bbox[3]:
            raise ShapeError(f"degenerate bbox {bbox}")
        nx, ny = int(self.nx), int(self.ny)
        if nx < 2 or ny < 2:
            raise ShapeError("raster resolution must be at least 2x2")
        bits = np.array(self.bits, dtype=bool)
        band = np.array(self.band, dtype=bool)
        if bits.shape != (ny, nx) or band.shape != (ny, nx):
            raise ShapeError(f"bit planes must have shape {(ny, nx)}")
        if (bits & band).any():
            raise ShapeError("banded cells must be stored undecided")
        bits.setflags(write=False)
        band.setflags(write=False)
        object.__setattr__(self, "bbox", bbox)
        object.__setattr__(self, "nx", nx)
        object.__setattr__(self, "ny", ny)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "band", band)

    @property
    def filled_fraction(self) -> float:
        return float(self.bits.sum()) / float(self.nx * self.ny)

    def cell_centers(self) -> np.ndarray:
        """All cell centers as a (2, nx*ny) array, row-major in (i, j)."""
        xmin, xmax, ymin, ymax = self.bbox
        xs = xmin + (np.arange(self.nx) + 0.5) * (xmax - xmin) / self.nx
        ys = ymin + (np.arange(self.ny) + 0.5) * (ymax - ymin) / self.ny
        XX, YY = np.meshgrid(xs, ys)
        return np.vstack([XX.ravel(), YY.ravel()])

    def __eq__(self, other):
        if not isinstance(other, RasterGrid):
            return NotImplemented
        return (
            self.bbox == other.bbox
            and self.nx == other.nx
            and self.ny == other.ny
            and np.array_equal(self.bits, other.bits)
            and np.array_equal(self.band, other.band)
        )


def _decide(s: SetLike, pts: np.ndarray, cfg: SolverConfig, slack: float):
    if isinstance(s, Rcg):
        v = rcg_member_batch(pts, s, cfg, slack)
    else:
        v = ccg_member_batch(pts, s, cfg, slack)
    return v.status == _FEAS, v.status == _INDET


def raster_membership(
    s: SetLike,
    bbox,
    nx: int,
    ny: int,
    cfg: SolverConfig = DEFAULT_CONFIG,
    band_tol: Optional[float] = None,
) -> RasterGrid:
    """Rasterize membership over ``bbox`` at ``nx`` by ``ny`` cells.

    Only 2-D sets rasterize. A cell lands in the band when its verdict is
    indeterminate or when widening vs narrowing every ball radius by
    ``band_tol`` (default ``10 * tol_feas``) flips the decision; all other
    cells are stable to well beyond the solver tolerance. Evaluation is a
    deterministic lockstep batch over all centers, equivalent to the
    per-cell scalar run.
    """
    if not isinstance(s, (Ccg, Rcg)):
        raise ShapeError(f"cannot rasterize {type(s).__name__}")
    if s.dim != 2:
        raise DimensionError(f"raster oracle handles 2-D sets only, got dim {s.dim}")
    if band_tol is None:
        band_tol = 10.0 * cfg.tol_feas
    shell = RasterGrid(tuple(bbox), nx, ny, np.zeros((ny, nx), bool), np.zeros((ny, nx), bool))
    pts = shell.cell_centers()
    member, indet = _decide(s, pts, cfg, 0.0)
    wide, indet_w = _decide(s, pts, cfg, +band_tol)
    narrow, indet_n = _decide(s, pts, cfg, -band_tol)
    band = indet | indet_w | indet_n | (wide != narrow)
    bits = member & ~band
    return RasterGrid(
        shell.bbox,
        nx,
        ny,
        bits.reshape(ny, nx),
        band.reshape(ny, nx),
    )


@dataclass(frozen=True)
class RasterComparison:
    """Cellwise diff of two same-shape rasters."""

    cells: int
    differing: int
    band_cells: int
    off_band_differing: int
    filled_union: int

    @property
    def off_band_fraction(self) -> float:
        """Off-band disagreements over the union filled count (the metric)."""
        return self.off_band_differing / max(self.filled_union, 1)


def compare_rasters(a: RasterGrid, b: RasterGrid) -> RasterComparison:
    if a.bbox != b.bbox or a.nx != b.nx or a.ny != b.ny:
        raise ShapeError("rasters cover different grids")
    diff = a.bits != b.bits
    band = a.band | b.band
    return RasterComparison(
        cells=a.nx * a.ny,
        differing=int(diff.sum()),
        band_cells=int(band.sum()),
        off_band_differing=int((diff & ~band).sum()),
        filled_union=int((a.bits | b.bits).sum()),
    )


# ---------------------------------------------------------------------------
# rejection sampling


def _draw_ball_product(rng: np.random.Generator, groups, m: int, k: int) -> np.ndarray:
    """Uniform draws from each group ball, assembled into (m, k) columns."""
    out = np.empty((m, k))
    for g in groups:
        idx = g.indices0
        d = idx.size
        r = g.radius
        if g.p == np.inf:
            out[idx] = rng.uniform(-r, r, size=(d, k))
        elif g.p == 2.0:
            z = rng.standard_normal((d, k))
            z /= np.linalg.norm(z, axis=0)
            out[idx] = z * (r * rng.uniform(0.0, 1.0, k) ** (1.0 / d))
        else:
            w = rng.exponential(1.0, size=(d, k))
            w /= w.sum(axis=0)
            signs = rng.integers(0, 2, size=(d, k)) * 2 - 1
            out[idx] = signs * w * (r * rng.uniform(0.0, 1.0, k) ** (1.0 / d))
    return out


_MIN_ACCEPT_RATE = 1e-4


def sample_members(
    s: SetLike,
    count: int,
    seed: int = 42,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Draw ``count`` points of the set; returns a (count, n) array.

    Coefficients are drawn uniformly per ball, projected onto the equality
    flat, and kept only if they still satisfy every ball; ring-set draws are
    additionally rejected when the inner member covers them. Every returned
    point passes the membership engine. Raises SamplingExhausted when the
    acceptance rate falls below 1e-4 (in particular for empty sets).
    """
    if not isinstance(s, (Ccg, Rcg)):
        raise ShapeError(f"cannot sample {type(s).__name__}")
    if count < 1:
        raise ShapeError("count must be positive")
    src = s.outer if isinstance(s, Rcg) else s
    m = src.n_generators
    rng = np.random.default_rng(seed)
    gdata = _group_data(src.groups, 0.0)
    consistent = True
    pinvA = None
    if src.n_constraints:
        pinvA = np.linalg.pinv(src.A)
        gap = np.linalg.norm(src.A @ (pinvA @ src.b) - src.b)
        consistent = gap <= cfg.tol_feas
    max_trials = max(200_000, int(count / _MIN_ACCEPT_RATE))
    batch = 8192
    kept = []
    accepted = 0
    trials = 0
    while accepted < count and trials < max_trials and consistent:
        k = min(batch, max_trials - trials)
        draws = _draw_ball_product(rng, src.groups, m, k)
        trials += k
        if pinvA is not None:
            draws = draws - pinvA @ (src.A @ draws - src.b[:, None])
            # the projection can leave the balls; re-check before mapping
            draws = draws[:, _ball_violation(draws, gdata) <= 1e-12] if m else draws
        pts = src.c[:, None] + src.G @ draws
        if isinstance(s, Rcg) and pts.shape[1]:
            inner = ccg_member_batch(pts, s.inner, cfg)
            pts = pts[:, inner.status == _INFEAS]
        if pts.shape[1]:
            kept.append(pts)
            accepted += pts.shape[1]
    if accepted < count:
        raise SamplingExhausted(
            f"accepted {accepted} of {count} after {trials} draws "
            f"(rate below {_MIN_ACCEPT_RATE})"
        )
    return np.hstack(kept)[:, :count].T.copy()
