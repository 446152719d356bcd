"""Geometry of non-singular symmetric matrices under the trace metric.

``g_A(V, W) = tr(A^{-1} V A^{-1} W)`` makes every ``GLSym_n(p)`` a
semi-Riemannian manifold; on the SPD cone it is the familiar
affine-invariant metric.
"""

from .curvature import einstein_check, ricci, riemann, scalar_at, sectional
from .exceptions import (
    ArgumentError,
    DomainError,
    IntegrationError,
    IterationError,
    NotAnIsometryError,
    TraceMetricError,
)
from .geodesics import (
    Geodesic,
    congruence_transporter,
    distance,
    exp_map,
    geodesic_at,
    geodesic_between,
    geodesic_from_tangent,
    geometric_mean,
    log_map,
)
from .isometry import INV, PSI, CanonicalIsometry, Congr, IsometryWord, apply, canonicalize, identify
from .manifold import (
    ManifoldPoint,
    TangentVector,
    classify_point,
    metric_eval,
    orthonormal_basis,
    product_join,
    product_split,
)
from .symcore import eig_sym, expm, log_principal, polar_decompose, power_frac, signature_of

__version__ = "0.1.0"
