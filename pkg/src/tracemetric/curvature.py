"""Riemann, sectional, Ricci and scalar curvature of the trace metric.

Sign convention: ``riemann(K, X, Y, X, Y)`` divided by the Gram determinant
of ``(X, Y)`` is the sectional curvature. With this convention every plane
of the SPD cone has curvature <= 0 and the unit-determinant 2x2 slice has
constant curvature -1/2. Ricci is the contraction
``Ric(X, Z) = sum_k eps_k R(X, V_k, Z, V_k)`` over an orthonormal frame
``V_k`` with ``eps_k = g(V_k, V_k)``.
"""

from dataclasses import dataclass

import numpy as np

from . import manifold
from .exceptions import ArgumentError, DomainError
from .manifold import as_matrix, classify_point, metric_eval

TOL_CURV = 1e-8
TOL_PLANE = 1e-10


@dataclass(frozen=True)
class CurvatureReport:
    """Einstein-property diagnostics at one point of a unit-determinant slice."""

    base: manifold.ManifoldPoint
    scalar: float
    scalar_closed_form: float
    einstein_residual: float
    samples: int

    @property
    def ok(self):
        return (
            abs(self.scalar - self.scalar_closed_form) < TOL_CURV
            and self.einstein_residual < TOL_CURV
        )


def _bracket(A, B):
    return A @ B - B @ A


def riemann(K, X, Y, Z, W):
    """(0,4) curvature tensor ``1/4 tr([K^-1 X, K^-1 Y] [K^-1 Z, K^-1 W])``."""
    Km = as_matrix(K)
    x, y, z, w = (np.linalg.solve(Km, M) for M in (X, Y, Z, W))
    return 0.25 * float(np.einsum("ij,ji->", _bracket(x, y), _bracket(z, w)))


def riemann_tensor(K, basis):
    """All components ``riemann(K, B_a, B_b, B_c, B_d)`` over a ``(d, n, n)`` basis stack."""
    Km = as_matrix(K)
    x = np.linalg.solve(Km[None], np.asarray(basis, dtype=float))
    prod = np.einsum("aij,bjk->abik", x, x)
    br = prod - prod.transpose(1, 0, 2, 3)
    return 0.25 * np.einsum("abij,cdji->abcd", br, br)


def sectional(K, X, Y):
    """Sectional curvature of the plane spanned by ``X`` and ``Y`` at ``K``.

    Raises
    ------
    ArgumentError
        If the plane is degenerate for ``g_K``: ``|g(X,X) g(Y,Y) - g(X,Y)^2|``
        is not above ``1e-10 * |K^-1 X|^2 |K^-1 Y|^2`` (Frobenius norms).
    """
    Km = as_matrix(K)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    gxx = metric_eval(Km, X, X)
    gyy = metric_eval(Km, Y, Y)
    gxy = metric_eval(Km, X, Y)
    x = np.linalg.solve(Km, X)
    y = np.linalg.solve(Km, Y)
    nx, ny = np.sum(x * x), np.sum(y * y)
    if not abs(gxx * gyy - gxy * gxy) > TOL_PLANE * nx * ny:
        raise ArgumentError("degenerate plane: Gram determinant vanishes")
    # both R(X,Y,X,Y) and the Gram determinant are unchanged by Y -> Y - cX;
    # orthogonalizing first avoids cancellation on thin planes
    if abs(gxx) * ny >= abs(gyy) * nx:
        X, Y, gxx, gyy, ny = Y, X, gyy, gxx, nx
    if abs(gyy) > 1e-3 * ny:
        X = X - (gxy / gyy) * Y
        return riemann(Km, X, Y, X, Y) / (metric_eval(Km, X, X) * gyy)
    return riemann(Km, X, Y, X, Y) / (gxx * gyy - gxy * gxy)


def ricci(Q, X, Z):
    """Ricci tensor ``1/4 tr(Q^-1 X) tr(Q^-1 Z) - n/4 g_Q(X, Z)`` (closed form)."""
    Qm = as_matrix(Q)
    n = Qm.shape[0]
    tx = np.trace(np.linalg.solve(Qm, X))
    tz = np.trace(np.linalg.solve(Qm, Z))
    return float(0.25 * tx * tz - 0.25 * n * metric_eval(Qm, X, Z))


def _frame(Q):
    # Q^{-1} V_k for an orthonormal frame V_k at Q, plus causal signs
    mats, signs = manifold.transported_basis(Q)
    return np.linalg.solve(as_matrix(Q)[None, :, :], mats), signs


def _ricci_contracted(qx, qz, frame, signs):
    # sum_k eps_k 1/4 tr([x, v_k][z, v_k]) with x = Q^-1 X, v_k = Q^-1 V_k
    bx = qx[None] @ frame - frame @ qx[None]
    bz = qz[None] @ frame - frame @ qz[None]
    vals = 0.25 * np.einsum("kij,kji->k", bx, bz)
    return float(np.dot(signs, vals))


def ricci_from_riemann(Q, X, Z, frame=None):
    """Ricci tensor by contracting :func:`riemann` over an orthonormal frame at ``Q``.

    Independent of the closed form in :func:`ricci`; used as its cross-check.
    """
    Qm = as_matrix(Q)
    if frame is None:
        frame = _frame(Qm)
    qx = np.linalg.solve(Qm, X)
    qz = np.linalg.solve(Qm, Z)
    return _ricci_contracted(qx, qz, *frame)


def scalar_closed_form(n):
    return -(n - 1) * n * (n + 2) / 8.0


def scalar_at(Q, mode="closed_form"):
    """Scalar curvature at ``Q``.

    Parameters
    ----------
    Q : array_like or ManifoldPoint
        Non-singular symmetric matrix.
    mode : {'closed_form', 'summed'}
        ``'closed_form'`` returns ``-(n-1) n (n+2) / 8``. ``'summed'``
        contracts the Riemann tensor twice over an orthonormal frame
        transported to ``Q`` by congruence, causal signs included.
    """
    pt = classify_point(Q)
    if mode == "closed_form":
        return scalar_closed_form(pt.n)
    if mode != "summed":
        raise ArgumentError(f"unknown mode {mode!r}")
    frame, signs = _frame(pt.matrix)
    total = 0.0
    for v, eps in zip(frame, signs):
        total += eps * _ricci_contracted(v, v, frame, signs)
    return total


def einstein_check(Q, samples=200, seed=0, mode="summed"):
    """Sample ``|Ric(X, Z) + n/4 g(X, Z)|`` over trace-free tangent pairs at ``Q``.

    Parameters
    ----------
    Q : array_like or ManifoldPoint
        Point with determinant ``(-1)^(n-p)``.
    samples : int
        Number of random ``(X, Z)`` pairs, each projected onto
        ``{V : tr(Q^-1 V) = 0}`` and normalized to unit Frobenius size of
        ``Q^-1 V``.
    seed : int
        Seed for ``numpy.random.default_rng``.
    mode : {'summed', 'closed_form'}
        Which Ricci evaluation to test.

    Raises
    ------
    DomainError
        If ``Q`` is off the unit-determinant slice.
    """
    pt = classify_point(Q)
    if not pt.on_unit_det_slice:
        raise DomainError(f"point is not on SLSym_{pt.n}({pt.p}) (det = {pt.det!r})")
    rng = np.random.default_rng(seed)
    n = pt.n
    Qm = pt.matrix
    frame, signs = _frame(Qm)
    V = rng.standard_normal((2 * samples, n, n))
    V = V + V.transpose(0, 2, 1)
    qv = np.linalg.solve(Qm[None], V)
    # project onto tr(Q^-1 V) = 0, then scale so ||Q^-1 V||_F = 1
    qv = qv - (np.trace(qv, axis1=1, axis2=2) / n)[:, None, None] * np.eye(n)
    qv = qv / np.linalg.norm(qv, axis=(1, 2))[:, None, None]
    qx, qz = qv[:samples], qv[samples:]
    g = np.einsum("mij,mji->m", qx, qz)
    if mode == "summed":
        bx = qx[:, None] @ frame[None] - frame[None] @ qx[:, None]
        bz = qz[:, None] @ frame[None] - frame[None] @ qz[:, None]
        ric = 0.25 * np.einsum("mkij,mkji->mk", bx, bz) @ signs
    elif mode == "closed_form":
        ric = np.array([ricci(Qm, Qm @ x, Qm @ z) for x, z in zip(qx, qz)])
    else:
        raise ArgumentError(f"unknown mode {mode!r}")
    worst = float(np.max(np.abs(ric + 0.25 * n * g))) if samples else 0.0
    return CurvatureReport(
        base=pt,
        scalar=scalar_at(pt, "summed"),
        scalar_closed_form=scalar_closed_form(n),
        einstein_residual=worst,
        samples=samples,
    )
