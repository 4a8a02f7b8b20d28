"""First Dirichlet p-Laplacian eigenvalues of convex polygons and their inradius bounds."""

from .bounds import (
    BoundReport,
    Verdict,
    ball_upper,
    cheeger_lower,
    faber_krahn_lower,
    geometric_check,
    hardy_lower,
    hersch_protter_lower,
    isoperimetric_lower,
    isoperimetric_upper,
    superhomogeneous_lower,
    verdict,
)
from .eigensolver import (
    DiscreteField,
    PLaplacianEigensolver,
    SolveResult,
    SolverConfig,
    gradient_check,
    minimize_lambda_p,
    minimize_lambda_pq,
    minimize_mixed,
    rayleigh_pq,
)
from .geometry import (
    ConvexPolygon,
    HalfspaceSet,
    InballResult,
    PyramidPiece,
    ShapeFamily,
    chebyshev_center,
    collapsing_pyramid,
    contact_set,
    distance_to_boundary,
    inradius,
    measure,
    perimeter,
    polyhedral_envelope,
    pyramid_decomposition,
    to_halfspaces,
)
from .mesh import TriangleMesh, refine, triangulate
from .poincare1d import PoincareConstant1D, half_poincare_estimate, pi_p_estimate, pi_p_reference

__version__ = "0.1.0"
