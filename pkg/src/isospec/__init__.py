"""Spectral counts of Neumann eigenvalues below the Dirichlet ground state,
with exact analytic oracles for rectangles and balls, for planar polygonal
domains discretized by linear finite elements."""

from .analytic import (
    BallCount,
    BallSpectrumEntry,
    RectangleSpec,
    ball_growth_check,
    ball_isoperimetric,
    ball_lambda1,
    ball_multiplicity,
    ball_N,
    rectangle_I,
    rectangle_N_2d,
    rectangle_N_exact,
    rectangle_sandwich_check,
    unit_ball_volume,
)
from .counting import (
    SolveOptions,
    SpectralReport,
    compute_N,
    reports_to_csv,
    spearman_rank_correlation,
    sweep,
    write_csv,
)
from .eig import (
    InertiaResult,
    count_leq,
    count_leq_retry,
    dense_count_below,
    eigenvalues_below,
    eigenvalues_near,
    smallest_eigenvalue,
)
from .errors import (
    AssemblyError,
    EvaluationRangeError,
    GenerationFailureError,
    InvalidDomainError,
    IsospecError,
    ParameterError,
    ResourceLimitError,
    SearchError,
    ShiftOnEigenvalueError,
    SolverError,
)
from .fem import DIRICHLET, NEUMANN, OperatorPair, assemble
from .geom import (
    GENERATORS,
    PlanarDomain,
    area,
    domain_from_json,
    domain_to_json,
    isoperimetric_ratio,
    make_comb,
    make_domain,
    make_random_polygon,
    make_rectangle,
    make_regular_polygon,
    make_square_annulus,
    make_waffle,
    perimeter,
    point_in_loop,
    scaled,
    segments_intersect,
    validate_domain,
)
from .mesh import Mesh, refine, triangulate, verify_mesh
from .specfun import (
    BesselZeroRecord,
    bessel_j,
    bessel_zero_j,
    bessel_zero_p,
    lorch_szego_interval,
    ultraspherical_deriv,
    zero_table,
)

__version__ = "0.1.0"
