"""Subtle Stiefel-Whitney calculus for classifying spaces.

Bigraded F2 polynomial rings with a motivic Steenrod action, a deterministic
Groebner/Hilbert kernel, splitting-principle maps, and ring presentations of
the mod-2 motivic cohomology of BO_n, BSO_n, BSpin_n and the even Clifford
groups, plus machine verification of the regularity and ideal-membership
statements those presentations rest on.
"""

from .algebra import (
    ANY_DEGREE,
    NON_HOMOGENEOUS,
    Bidegree,
    Polynomial,
    PolyParseError,
    RingContext,
    RingMap,
    Variable,
    apply_ring_map,
    bidegree_of,
    custom_context,
    format_poly,
    inclusion_map,
    make_bo,
    make_bso,
    make_bso_top,
    make_chern,
    make_ring,
    make_split,
    make_sym,
    parse_poly,
    ring_map,
    truncation_map,
    variable,
)
from .groebner import (
    GroebnerBasis,
    HilbertSeries,
    MonomialOrder,
    RegularityCertificate,
    ResourceLimitError,
    groebner_basis,
    hilbert_series,
    ideal_member,
    is_regular_sequence,
    koszul_series,
    normal_form,
    radical_member,
)
from .presentations import (
    Presentation,
    bound_indices,
    chern_class,
    express_in_chern,
    present,
    presentation_hilbert,
    radical_equal_on_generators,
    topological_comparison,
    verify_chern_relation,
    verify_theta_sequence,
)
from .splitting import (
    GramForm,
    beta,
    gamma,
    right_radical,
    twist_sequence,
    verify_bilinear_regularity,
    verify_seq_theorem,
)
from .steenrod import SteenrodOp, h_map, i_map, rho, sq, sq_gen, t_map, theta

__all__ = [
    "GramForm",
    "GroebnerBasis",
    "HilbertSeries",
    "MonomialOrder",
    "Presentation",
    "RegularityCertificate",
    "ResourceLimitError",
    "beta",
    "bound_indices",
    "chern_class",
    "express_in_chern",
    "gamma",
    "groebner_basis",
    "hilbert_series",
    "ideal_member",
    "is_regular_sequence",
    "koszul_series",
    "normal_form",
    "present",
    "presentation_hilbert",
    "radical_equal_on_generators",
    "radical_member",
    "right_radical",
    "topological_comparison",
    "twist_sequence",
    "verify_bilinear_regularity",
    "verify_chern_relation",
    "verify_seq_theorem",
    "verify_theta_sequence",
    "ANY_DEGREE",
    "NON_HOMOGENEOUS",
    "Bidegree",
    "Polynomial",
    "PolyParseError",
    "RingContext",
    "RingMap",
    "SteenrodOp",
    "Variable",
    "apply_ring_map",
    "bidegree_of",
    "custom_context",
    "format_poly",
    "h_map",
    "i_map",
    "inclusion_map",
    "make_bo",
    "make_bso",
    "make_bso_top",
    "make_chern",
    "make_ring",
    "make_split",
    "make_sym",
    "parse_poly",
    "rho",
    "ring_map",
    "sq",
    "sq_gen",
    "t_map",
    "theta",
    "truncation_map",
    "variable",
]
