"""Rank-2 holomorphic bundles on non-Kähler elliptic surfaces.

Fibre arithmetic on the Tate model, Néron–Severi intersection theory,
sections and bisections of the relative Jacobian, spectral covers of
rank-2 bundles, and the existence classification with replayable
construction recipes.
"""

from .bundles import (
    ElemModBundle,
    ExtensionBundle,
    FibreRestriction,
    Filtrability,
    LineBundleOnX,
    NonSplitRestriction,
    RankTwoBundle,
    SpectralCover,
    SpectralPushBundle,
    SpectralVerificationError,
    SplitRestriction,
    UnstableRestriction,
    apply_modification_ledger,
    chern_data,
    chern_of_extension,
    elementary_modification,
    filtrability,
    restrict_to_fibre,
    spectral_accounting,
    spectral_cover,
    trivial_line_bundle,
)
from .existence import (
    Existence,
    GapKind,
    Recipe,
    Verdict,
    existence_verdict,
    filtrable_gap,
    replay_recipe,
)
from .jacobian import (
    Bisection,
    DoubleCoverData,
    RationalMap,
    RuledBounds,
    RuledSurfaceData,
    SectionOfJ,
    base_point,
    branch_point_count,
    branch_points_numeric,
    constant_section,
    cover_fibre_values,
    genus_and_branching,
    graph_self_intersection,
    involution_apply,
    involution_on_section,
    irreducible_bisection,
    is_invariant_bisection,
    reducible_bisection,
    ruled_invariant_bounds,
    ruled_surface_data,
    sample_base_points,
    section_for_class,
    section_pairing,
    section_value,
    sections_equal,
    zero_section,
)
from .surface import (
    BaseCurve,
    ChernData,
    HomLattice,
    NSClass,
    SurfaceData,
    UNIT_LATTICE,
    ZERO_LATTICE,
    canonical_class,
    discriminant,
    filtrable_bound,
    pairing,
    self_intersection,
    spectral_support_count,
)
from .tate import (
    DEFAULT_TOL,
    INF,
    CurveParam,
    SeriesCapError,
    TatePoint,
    Tolerance,
    canonicalize,
    class_distance,
    distance_to_identity,
    group_inv,
    group_mul,
    group_pow,
    h1_indicator,
    identity,
    is_infinite,
    points_equal,
    quotient_x,
    quotient_x_at,
    two_torsion,
    x_preimages,
)

__version__ = "0.1.0"
