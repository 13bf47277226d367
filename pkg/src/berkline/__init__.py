"""Exact geometry on the Berkovich projective line over small valued fields.

The package computes skeleta, deformation retractions, Newton-polygon
root data and tropicalizations with exact rational arithmetic, together
with a piecewise-linear barycentric flow on tuples in the value group.
"""

from __future__ import annotations

from .errors import (
    BerklineError,
    InconsistencyError,
    PreconditionError,
    SceneError,
)
from .fields import PAdicField, RatFunc, TAdicField, field_from_json
from .gamma import INF, Gamma, GammaError, MinAffine, gmax, gmin
from .gflow import (
    Cell,
    CellComplex,
    FlowResult,
    FlowStep,
    Functional,
    build_complex,
    cell_dimension,
    cells,
    classify_D0,
    core_bounds,
    exit_time,
    final_image_membership,
    flow,
    lipschitz_bound,
    locate_cell,
    recession_barycenter,
    xi_value,
)
from .newton import (
    NewtonPolygon,
    RootProfile,
    branch_events,
    coeff_val_path,
    newton_polygon,
    quadratic_residual_square,
    root_valuations_along_path,
)
from .pline import (
    INV,
    STD,
    PLinePoint,
    depth,
    gauss_point,
    gauss_val,
    infinity_point,
    join,
    metric_d,
    normalize_point,
    psi,
    psi_divisor,
    retract,
    rho,
    simple_point,
    skeleton,
    skeleton_contains,
)
from .topo import (
    Fingerprint,
    family_sweep,
    tree_fingerprint,
    tree_iso,
    tree_shape_code,
)
from .tree import MetricTree
from .trop import (
    TropPoint,
    polydisk_gauss_val,
    semilattice_member,
    tau_h,
    trop_normalize,
)

__version__ = "0.1.0"

__all__ = [
    "BerklineError",
    "Cell",
    "CellComplex",
    "Fingerprint",
    "FlowResult",
    "FlowStep",
    "Functional",
    "Gamma",
    "GammaError",
    "INF",
    "INV",
    "InconsistencyError",
    "MetricTree",
    "MinAffine",
    "NewtonPolygon",
    "PAdicField",
    "PLinePoint",
    "PreconditionError",
    "RatFunc",
    "RootProfile",
    "STD",
    "SceneError",
    "TAdicField",
    "TropPoint",
    "branch_events",
    "build_complex",
    "cell_dimension",
    "cells",
    "classify_D0",
    "coeff_val_path",
    "core_bounds",
    "depth",
    "exit_time",
    "family_sweep",
    "field_from_json",
    "final_image_membership",
    "flow",
    "gauss_point",
    "gauss_val",
    "gmax",
    "gmin",
    "infinity_point",
    "join",
    "lipschitz_bound",
    "locate_cell",
    "metric_d",
    "newton_polygon",
    "normalize_point",
    "polydisk_gauss_val",
    "psi",
    "psi_divisor",
    "quadratic_residual_square",
    "recession_barycenter",
    "retract",
    "rho",
    "root_valuations_along_path",
    "semilattice_member",
    "simple_point",
    "skeleton",
    "skeleton_contains",
    "tau_h",
    "tree_fingerprint",
    "tree_iso",
    "tree_shape_code",
    "trop_normalize",
    "xi_value",
]
