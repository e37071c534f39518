"""Transfinite diameters, directional Chebyshev constants, and resultants
for polynomial self-maps of C^2, along the graph variety {w = f(z)}."""

from .chebyshev import (
    ChebyshevEstimate,
    chebyshev_transform,
    chebyshev_value,
    evaluate_monomials,
    zaharjuta_integral,
)
from .diameters import (
    DiameterSeries,
    PullbackReport,
    TelescopingReport,
    VandermondeLedger,
    greedy_fekete,
    pullback_check,
    telescoping_check,
    transfinite_diameter,
)
from .errors import (
    CapaxError,
    DegreeOverflowError,
    EstimateError,
    FiberError,
    MapError,
    MeshError,
    ParseError,
    PrecisionError,
    StaircaseError,
    StarSearchError,
)
from .exact import GaussianRational
from .parsing import format_poly, parse_poly
from .polynomials import (
    GREVLEX4,
    GREVLEX_W,
    GREVLEX_Z,
    GraphWeighted,
    Monomial,
    Polynomial,
    substitute_graph,
)
from .resultant import (
    BlockReport,
    BlockShape,
    block_factorization,
    block_shape,
    is_regular,
    resultant,
    resultant_root_oracle,
    resultant_slog,
    sylvester_matrix,
    total_copies,
)
from .sets import (
    FiberResult,
    SampledSet,
    SetSpec,
    build_mesh,
    fiber,
    fiber_average_poly,
    graph_lift,
)
from .variety import (
    GraphMap,
    IndependenceReport,
    MonomialBasisStream,
    StarCertificate,
    basis_stream,
    check_star,
    star_certificate,
    StarReport,
    classical_counts,
    filtration_counts,
    generic_staircase,
    graph_basis,
    independence_check,
    is_generic,
    normal_form,
    precondition,
    staircase,
)

__version__ = "0.1.0"

__all__ = [
    "CapaxError",
    "ChebyshevEstimate",
    "DegreeOverflowError",
    "DiameterSeries",
    "EstimateError",
    "FiberError",
    "FiberResult",
    "GaussianRational",
    "GraphMap",
    "GraphWeighted",
    "GREVLEX4",
    "GREVLEX_W",
    "GREVLEX_Z",
    "IndependenceReport",
    "MapError",
    "MeshError",
    "Monomial",
    "MonomialBasisStream",
    "ParseError",
    "Polynomial",
    "PrecisionError",
    "PullbackReport",
    "SampledSet",
    "SetSpec",
    "StaircaseError",
    "StarCertificate",
    "StarSearchError",
    "TelescopingReport",
    "VandermondeLedger",
    "basis_stream",
    "block_factorization",
    "block_shape",
    "BlockReport",
    "BlockShape",
    "build_mesh",
    "check_star",
    "star_certificate",
    "StarReport",
    "chebyshev_transform",
    "chebyshev_value",
    "classical_counts",
    "evaluate_monomials",
    "fiber",
    "fiber_average_poly",
    "filtration_counts",
    "format_poly",
    "generic_staircase",
    "graph_basis",
    "graph_lift",
    "greedy_fekete",
    "independence_check",
    "is_generic",
    "is_regular",
    "normal_form",
    "parse_poly",
    "precondition",
    "pullback_check",
    "resultant",
    "resultant_root_oracle",
    "resultant_slog",
    "staircase",
    "substitute_graph",
    "sylvester_matrix",
    "telescoping_check",
    "total_copies",
    "transfinite_diameter",
    "zaharjuta_integral",
]
