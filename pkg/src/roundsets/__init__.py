"""Convex generator sets with an optional exclusion hole.

A ``Ccg`` is an affine image of a product of norm balls intersected with an
affine flat; an ``Rcg`` removes one closed ``Ccg`` hole from another.  The
package provides exact closed-form set operations, a projection-based
membership solver with three-way verdicts, rejection samplers and raster
oracles for cross-checking, and SVG/CSV renderers.
"""

from .ccg_ops import (
    SupportBound,
    halfspace_cut,
    intersect,
    linear_map,
    minkowski,
    support_upper_bound,
)
from .errors import (
    AffineInfeasible,
    DimensionError,
    NormError,
    ParseError,
    PartitionError,
    RadiusError,
    RoundsetsError,
    SamplingExhausted,
    ShapeError,
    UnsupportedOperation,
)
from .feasibility import (
    DEFAULT_CONFIG,
    FeasibilityProblem,
    FeasibilityVerdict,
    SolverConfig,
    Status,
    ccg_empty,
    ccg_member,
    ccg_member_batch,
    emptiness_problem,
    membership_problem,
    project_affine,
    project_ball,
    rcg_member,
    rcg_member_batch,
    solve_feasibility,
)
from .oracle import (
    RasterComparison,
    RasterGrid,
    compare_rasters,
    raster_membership,
    sample_members,
)
from .rcg_ops import (
    AnnulusForm,
    CommonGeneratorForm,
    RzIntersection,
    RzParamRegion,
    common_generator_form,
    from_difference,
    intersect_with_ccg,
    minkowski_with_ccg,
    roundabout_constrained_zonotope,
    roundabout_ellipsotope,
    roundabout_zonotope,
    rz_intersect_zonotope,
    try_annulus_form,
)
from .rcg_ops import linear_map as rcg_linear_map
from .render import RenderStyle, export_csv, parse_csv, render_svg
from .serialize import emit_set_json, parse_set_json
from .sets import (
    Ccg,
    Halfspace,
    HalfspaceCut,
    LinearMap,
    NormGroup,
    Rcg,
    single_group,
    validate_ccg,
    validate_rcg,
)

__version__ = "0.1.0"

__all__ = [
    "AffineInfeasible",
    "AnnulusForm",
    "Ccg",
    "CommonGeneratorForm",
    "DEFAULT_CONFIG",
    "DimensionError",
    "FeasibilityProblem",
    "FeasibilityVerdict",
    "Halfspace",
    "HalfspaceCut",
    "LinearMap",
    "NormError",
    "NormGroup",
    "ParseError",
    "PartitionError",
    "RadiusError",
    "RasterComparison",
    "RasterGrid",
    "Rcg",
    "RenderStyle",
    "RoundsetsError",
    "RzIntersection",
    "RzParamRegion",
    "SamplingExhausted",
    "ShapeError",
    "SolverConfig",
    "Status",
    "SupportBound",
    "UnsupportedOperation",
    "ccg_empty",
    "ccg_member",
    "ccg_member_batch",
    "common_generator_form",
    "compare_rasters",
    "emit_set_json",
    "emptiness_problem",
    "export_csv",
    "from_difference",
    "halfspace_cut",
    "intersect",
    "intersect_with_ccg",
    "linear_map",
    "membership_problem",
    "minkowski",
    "minkowski_with_ccg",
    "parse_csv",
    "rcg_linear_map",
    "parse_set_json",
    "project_affine",
    "project_ball",
    "raster_membership",
    "rcg_member",
    "rcg_member_batch",
    "render_svg",
    "roundabout_constrained_zonotope",
    "roundabout_ellipsotope",
    "roundabout_zonotope",
    "rz_intersect_zonotope",
    "sample_members",
    "single_group",
    "solve_feasibility",
    "support_upper_bound",
    "try_annulus_form",
    "validate_ccg",
    "validate_rcg",
]
