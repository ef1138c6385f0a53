"""Totally separable translate packings: verification, certificates, bounds."""

from .bodies import (
    ConvexBody,
    ball,
    ellipsoid,
    is_auerbach_basis,
    minkowski_symmetrize,
    p_ball,
    polytope_h,
    polytope_v,
    slab_intersection,
    smoothed_polytope,
    surface_area_estimate,
    volume_estimate,
)
from .bounds import (
    BoundReport,
    TranslateUnion,
    csep_simplified_bound,
    csep_upper_bound,
    density_check,
    hadwiger_bounds,
    halved_translates_certificate,
    isoperimetric_ratio,
    lambda_sep_estimate,
    planar_bound,
)
from .constructors import (
    SearchResult,
    cross_polytope_config,
    example_5d,
    grid_packing_2d,
    hadwiger_config_search,
    spiky_body_3d,
)
from .errors import (
    InvalidArgumentError,
    NotSupportedError,
    PreconditionError,
    UnboundedBodyError,
)
from .linearization import (
    PairSystem,
    check_condition,
    check_face_property,
    check_interior_bound,
    from_configuration,
    hsep_recursion_bound,
    obtuse_projection,
    one_sided_check,
    reduce_dimension,
    slab_body,
    steinitz_core,
)
from .packing import ContactGraph, Packing, check_packing, contact_graph, contact_statistics
from .separability import (
    Hyperplane,
    SeparabilityCertificate,
    certify_totally_separable,
    check_rho_separable,
    separating_hyperplane,
    verify_hyperplane,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
