"""Exact toric machinery for degrees and entropy of monomial maps."""
from .cones import Cone, MeetKind, lattice_normal, make_cone, translated_meet
from .dynamics import (
    DegreeReport,
    GrowthFit,
    MonomialMap,
    PullbackMatrix,
    cremona_degrees,
    degree_growth_pn,
    dynamical_degrees,
    pullback_matrix_closed,
    pullback_matrix_pipeline,
)
from .errors import ToricDynError
from .fans import Fan, common_refinement, fan_p1n, fan_pn, fan_validate, is_compatible
from .weights import (
    DualBasisSpec,
    MinkowskiWeight,
    cup_at_zero,
    pick_generic_vector,
    pullback_along_morphism,
    pushforward_to_target,
    standard_weight_basis,
    verify_weight,
)

__version__ = "0.1.0"
