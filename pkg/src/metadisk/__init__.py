"""Meta-analytic functions on the unit disk: construction, evaluation,
boundary behavior, and Schwarz-type boundary value problems."""

from .boundary import (
    BoundaryDistribution,
    CircleSampler,
    HardyNormEstimate,
    HoloSeries,
    PairingResult,
    TestFunction,
    growth_order,
    hardy_norm,
    lp_boundary_convergence,
    meta_hardy_norm,
    pairing_limit,
    poisson_extend,
)
from .disk import (
    DiskPoint,
    PolarGrid,
    RadialSequence,
    disk_quadrature,
    wirtinger_dbar,
)
from .errors import (
    Divergent,
    FitResidualTooLarge,
    IllConditioned,
    MetadiskError,
    NonConvergent,
    NonFinite,
    PairingMismatch,
    ProductNotIdentity,
    SimilarityNotRealAtZero,
    StencilOutsideDisk,
)
from .integral import (
    BivarPoly,
    SimilarityFactor,
    schwarz_pompeiu,
    similarity_factor,
    teodorescu,
    teodorescu_poly,
    teodorescu_quadrature_oracle,
)
from .meta import (
    DecompositionFit,
    MetaExpr,
    PolyAnalytic,
    TriangularOperatorMatrix,
    decompose_samples,
    derivative_matrix,
    derivative_stack,
    dbar_shift,
    invert_unitriangular,
    meta_eval,
    pde_residual,
    poly_decompose,
)
from .report import Check, Report
from .schwarz import (
    BoundaryReport,
    ChainResult,
    SchwarzProblem,
    SchwarzSolution,
    chain_from_top,
    default_test_basis,
    imag_mean_constant,
    solve_meta,
    solve_meta_smooth,
    solve_poly_chain,
    verify_boundary_conditions,
    verify_solution,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
