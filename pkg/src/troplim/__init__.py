"""Exact tropical limits: cones, fans, germs, skeletons, towers.

Everything computes over the rationals; no floating point enters any
certified result.  The numeric path sampler in `sampling` is the one
deliberately approximate component and is used only as a cross-check
oracle against the exact projective tropicalization.
"""

from .complexes import (
    Cell,
    ComplexMap,
    DeltaComplex,
    FiberComplex,
    StrataIncidence,
    SubdivisionResult,
    ToricFiberComplex,
    canonical_point,
    collapse_to_algebraic,
    compare_fiber,
    count_cells,
    cycle_complex,
    euler_characteristic,
    from_incidence,
    induced_map,
    make_complex,
    make_incidence,
    map_fiber,
    nodal_cubic_incidence,
    polygon_incidence,
    rational_points,
    scale_subdivide,
    toric_fiber_complex,
)
from .errors import TropLimError
from .fans import (
    Fan,
    FanReport,
    common_refinement,
    fan_from_cones,
    fan_from_rays_2d,
    is_subdivision,
    stellar_subdivision,
    validate_fan,
)
from .galaxy import (
    EllipticTower,
    GalaxyPoint,
    PolygonDegeneration,
    base_change,
    classify_point,
    decomposition,
    elliptic_tower,
    f_tr_cell,
    galaxy_point,
    polygon_degeneration,
)
from .lattice import (
    RANK_CAP,
    Cone,
    Ray,
    cone_contains,
    cone_from_generators,
    cone_intersect,
    primitive,
)
from .sampling import SampleConfig, distance_to_ptrop, ptrop_sample_oracle
from .towers import (
    TOWER_DEPTH_CAP,
    FanTower,
    Symbol,
    SymbolicVector,
    chain_toward,
    extend_tower,
    fan_tower,
    fiber_model,
    fiber_rank,
    resolve_direction,
    symbolic_vector,
)
from .tropical import (
    PTropSet,
    TropicalPolynomial,
    count_ptrop_points,
    newton_polytope,
    normal_fan,
    ptrop_ideal,
    ptrop_normal_fan,
    ptrop_recession,
    trop_eval,
    trop_hypersurface,
    trop_poly,
)

__version__ = "0.1.0"
