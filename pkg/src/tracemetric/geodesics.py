"""Closed-form geodesics, exponential/log maps, distance and geometric means.

Geodesics of ``GLSym_n(p)`` through ``K`` with initial velocity ``V`` are
``t -> K expm(t K^{-1} V)`` for every signature. Boundary-value problems
(geodesic between two points, distance, means) are only offered on the SPD
cone, where the connecting geodesic exists and is unique.
"""

from dataclasses import dataclass, field

import numpy as np

from . import symcore
from .exceptions import ArgumentError
from .manifold import (
    TOL_TRACE,
    ManifoldPoint,
    TangentVector,
    classify_point,
    require_spd,
)


@dataclass(frozen=True)
class Geodesic:
    """The curve ``t -> K expm(t C)`` with ``C = K^{-1} V``.

    Attributes
    ----------
    start : ManifoldPoint
        ``K``, the point at ``t = 0``.
    direction : ndarray
        ``C = K^{-1} V``; generally not symmetric.
    restricted_to_sl : bool
        True when ``tr C = 0``, i.e. the curve stays on the level set of
        the determinant.
    """

    start: ManifoldPoint
    direction: np.ndarray = field(repr=False)
    restricted_to_sl: bool = False

    @property
    def velocity(self):
        """Initial velocity ``V = K C`` (symmetric)."""
        return symcore.sym(self.start.matrix @ self.direction)

    def __call__(self, t):
        return geodesic_at(self, t)


def geodesic_from_tangent(K, V, restrict_to_sl=None):
    """Geodesic through ``K`` with initial velocity ``V`` (any signature).

    ``restrict_to_sl`` defaults to whether ``tr(K^{-1} V)`` vanishes; passing
    True for a velocity that is not trace-free raises :class:`ArgumentError`.
    """
    if isinstance(V, TangentVector):
        K, V = V.base, V.value
    pt = classify_point(K)
    V = symcore.as_symmetric(V)
    C = np.linalg.solve(pt.matrix, V)
    free = abs(np.trace(C)) < TOL_TRACE * max(np.linalg.norm(V), 1.0)
    if restrict_to_sl is None:
        restrict_to_sl = free
    elif restrict_to_sl and not free:
        raise ArgumentError("velocity is not tangent to the unit-determinant slice")
    return Geodesic(pt, C, bool(restrict_to_sl))


def _point_on(geo, t):
    return symcore.sym(geo.start.matrix @ symcore.expm(t * geo.direction))


def geodesic_at(geo, t):
    """Point ``K expm(t C)`` of the geodesic, classified as a :class:`ManifoldPoint`."""
    return classify_point(_point_on(geo, t))


def geodesic_matrix_at(geo, t):
    """Same as :func:`geodesic_at` but returns the bare array (no classification)."""
    return _point_on(geo, t)


def geodesic_velocity(geo, t):
    """``gamma'(t) = gamma(t) C``, evaluated analytically."""
    return symcore.sym(_point_on(geo, t) @ geo.direction)


def geodesic_between(A, B):
    """The unique geodesic of the SPD cone with ``gamma(0) = A`` and ``gamma(1) = B``.

    The direction is ``LOG(A^{-1} B)``, computed through the symmetric matrix
    ``A^{-1/2} B A^{-1/2}``.
    """
    A = require_spd(A, "A")
    B = require_spd(B, "B")
    C = symcore.log_spd_pair(A.matrix, B.matrix)
    return Geodesic(A, C, bool(abs(np.trace(C)) < TOL_TRACE * max(np.linalg.norm(C), 1.0)))


def log_map(A, B):
    """Riemannian logarithm: tangent vector ``A LOG(A^{-1} B)`` at ``A`` pointing to ``B``."""
    geo = geodesic_between(A, B)
    V = geo.velocity
    return TangentVector(geo.start, V, geo.restricted_to_sl)


def exp_map(A, V):
    """Riemannian exponential ``A expm(A^{-1} V)``; works for any signature."""
    return geodesic_at(geodesic_from_tangent(A, V), 1.0)


def distance(A, B):
    """Geodesic distance on the SPD cone.

    ``d(A, B) = sqrt(sum_i ln(mu_i)^2)`` where ``mu_i`` are the eigenvalues of
    ``A^{-1} B``, obtained from the similar SPD matrix ``A^{-1/2} B A^{-1/2}``.

    Parameters
    ----------
    A, B : array_like or ManifoldPoint
        SPD matrices of the same order.

    Returns
    -------
    float
    """
    A = require_spd(A, "A").matrix
    B = require_spd(B, "B").matrix
    Aih = symcore.inv_sqrt_spd(A)
    _, mu = symcore.eig_sym(symcore.sym(Aih @ B @ Aih))
    symcore._check_positive(mu, "A^{-1/2} B A^{-1/2}")
    return float(np.sqrt(np.sum(np.log(mu) ** 2)))


def geometric_mean(A, B):
    """Midpoint of the geodesic from ``A`` to ``B``."""
    return geodesic_at(geodesic_between(A, B), 0.5)


def congruence_transporter(A, B):
    """The SPD matrix ``X`` with ``X A X = B``: the geometric mean of ``A^{-1}`` and ``B``."""
    A = require_spd(A, "A")
    Ainv = symcore.inv_spd(A.matrix)
    return geometric_mean(Ainv, B).matrix


def interpolate(A, B, ts):
    """Points of the connecting geodesic at each ``t`` in ``ts`` (list of arrays)."""
    geo = geodesic_between(A, B)
    return [_point_on(geo, float(t)) for t in ts]


def speed(geo, t):
    """``g(gamma', gamma')`` at ``gamma(t)``; constant along a geodesic."""
    P = _point_on(geo, t)
    D = symcore.sym(P @ geo.direction)
    X = np.linalg.solve(P, D)
    return float(np.einsum("ij,ji->", X, X))

