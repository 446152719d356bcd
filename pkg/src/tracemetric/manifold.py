"""Manifolds of non-singular symmetric matrices under the trace metric.

A point of ``GLSym_n(p)`` is a non-singular symmetric matrix with ``p``
positive eigenvalues. ``SLSym_n(p)`` is the slice with determinant
``(-1)^(n-p)``; the positive-definite component (``p = n``) is the SPD cone
and its unit-determinant slice is ``SLP_n``.

The metric at ``A`` is ``g_A(V, W) = tr(A^{-1} V A^{-1} W)``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import symcore
from .exceptions import ArgumentError, DomainError

TOL_DET = 1e-9
TOL_TRACE = 1e-10  # relative to ||V||_F


@dataclass(frozen=True)
class ManifoldPoint:
    """A non-singular symmetric matrix with its signature and slice membership.

    Build instances with :func:`classify_point`; the signature is computed
    once, eagerly, from an eigendecomposition.
    """

    matrix: np.ndarray = field(repr=False)
    p: int
    det: float
    on_unit_det_slice: bool

    def __post_init__(self):
        self.matrix.setflags(write=False)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def q(self):
        return self.n - self.p

    @property
    def is_spd(self):
        return self.p == self.n

    @property
    def manifold(self):
        """Smallest named manifold containing the point, e.g. ``'SLSym_3(2)'``."""
        n, p = self.n, self.p
        if p == n:
            return f"SLP_{n}" if self.on_unit_det_slice else f"P_{n}"
        return f"SLSym_{n}({p})" if self.on_unit_det_slice else f"GLSym_{n}({p})"


@dataclass(frozen=True)
class TangentVector:
    base: ManifoldPoint
    value: np.ndarray = field(repr=False)
    trace_free_at_base: bool


@dataclass(frozen=True)
class BasisElement:
    """Element of the ``g_{J_p}``-orthonormal basis; ``causal_sign`` is ``g(E, E)``."""

    matrix: np.ndarray = field(repr=False)
    causal_sign: int
    label: str = ""


def as_matrix(A):
    """Underlying array of a :class:`ManifoldPoint` or array-like."""
    if isinstance(A, ManifoldPoint):
        return A.matrix
    return np.asarray(A, dtype=float)


def classify_point(A):
    """Classify a symmetric matrix as a point of ``GLSym_n(p)``.

    Parameters
    ----------
    A : array_like or ManifoldPoint

    Returns
    -------
    ManifoldPoint

    Raises
    ------
    ArgumentError
        If ``A`` is not symmetric.
    DomainError
        If ``A`` is singular.
    """
    if isinstance(A, ManifoldPoint):
        return A
    A = symcore.as_symmetric(A)
    _, lam = symcore.eig_sym(A)
    sig = symcore._signature_from_eigs(lam)
    det = float(np.prod(lam))
    target = (-1.0) ** sig.q
    return ManifoldPoint(A, sig.p, det, bool(abs(det - target) < TOL_DET))


def require_spd(A, what="point"):
    pt = classify_point(A)
    if not pt.is_spd:
        raise DomainError(f"{what} is not positive definite (signature {pt.p},{pt.q})")
    return pt


def metric_eval(base, V, W):
    """Trace metric ``g_A(V, W) = tr(A^{-1} V A^{-1} W)``."""
    A = as_matrix(base)
    AiV = np.linalg.solve(A, V)
    AiW = np.linalg.solve(A, W)
    return float(np.einsum("ij,ji->", AiV, AiW))


def orthonormal_basis(n, p):
    """Orthonormal basis of ``Sym_n`` for ``g`` at ``J_p``.

    The diagonal units ``E(i,i)`` and the symmetrized off-diagonal units
    ``S(i,j) = (E(i,j) + E(j,i)) / sqrt(2)``, ``i < j``. ``S(i,j)`` is
    time-like exactly when ``i < p <= j`` (0-based), so ``p (n - p)`` elements
    carry sign ``-1``.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ArgumentError(f"order n must be an integer >= 2, got {n!r}")
    if not 0 <= p <= n:
        raise ArgumentError(f"signature index p={p} outside [0, {n}]")
    basis = []
    for i in range(n):
        E = np.zeros((n, n))
        E[i, i] = 1.0
        basis.append(BasisElement(E, 1, f"E({i + 1},{i + 1})"))
    for i in range(n):
        for j in range(i + 1, n):
            S = np.zeros((n, n))
            S[i, j] = S[j, i] = 1.0 / np.sqrt(2.0)
            sign = -1 if i < p <= j else 1
            basis.append(BasisElement(S, sign, f"S({i + 1},{j + 1})"))
    return basis


def transported_basis(Q):
    """``g_Q``-orthonormal basis of ``Sym_n``, transported from ``J_p``.

    With ``C Q C^T = J_p`` the congruence by ``C^{-1}`` is an isometry taking
    ``J_p`` to ``Q``, so it carries the basis of :func:`orthonormal_basis` at
    ``J_p`` to an orthonormal basis at ``Q`` with the same causal signs.

    Returns
    -------
    mats : ndarray, shape (d, n, n)
    signs : ndarray, shape (d,)
    """
    Qm = as_matrix(Q)
    C, p = symcore.congruence_to_canonical(Qm)
    Ci = np.linalg.inv(C)
    elems = orthonormal_basis(Qm.shape[0], p)
    mats = np.stack([Ci @ e.matrix @ Ci.T for e in elems])
    mats = 0.5 * (mats + mats.transpose(0, 2, 1))
    return mats, np.array([e.causal_sign for e in elems], dtype=float)


def trace_at(Q, V):
    """``tr(Q^{-1} V)``; zero exactly on tangent vectors of the unit-det slice."""
    return float(np.trace(np.linalg.solve(as_matrix(Q), V)))


def tangent_vector(Q, V):
    pt = classify_point(Q)
    V = symcore.as_symmetric(V)
    free = abs(trace_at(pt, V)) < TOL_TRACE * max(np.linalg.norm(V), 1.0)
    return TangentVector(pt, V, free)


def project_tangent_sl(Q, V):
    """Project ``V`` onto ``T_Q SLSym = {V : tr(Q^{-1} V) = 0}``.

    Returns ``V - tr(Q^{-1} V) / n * Q`` wrapped as a :class:`TangentVector`.
    The projection is idempotent.
    """
    pt = classify_point(Q)
    V = symcore.as_symmetric(V)
    P = V - trace_at(pt, V) / pt.n * pt.matrix
    P = symcore.sym(P)
    free = abs(trace_at(pt, P)) < TOL_TRACE * max(np.linalg.norm(P), np.linalg.norm(V), 1.0)
    return TangentVector(pt, P, free)


def product_split(A):
    """Split an SPD matrix as ``(Q, x)`` with ``det Q = 1`` and ``A = e^{x/sqrt(n)} Q``.

    ``Q = A / det(A)^{1/n}`` and ``x = ln det(A) / sqrt(n)``.
    """
    pt = require_spd(A)
    n = pt.n
    logdet = float(np.log(pt.det))
    Q = classify_point(pt.matrix * np.exp(-logdet / n))
    return Q, logdet / np.sqrt(n)


def product_join(Q, x):
    """``F(Q, x) = e^{x/sqrt(n)} Q``; inverse of :func:`product_split`.

    Raises
    ------
    DomainError
        If ``Q`` is not SPD with unit determinant.
    """
    pt = require_spd(Q, "Q")
    if abs(pt.det - 1.0) >= TOL_DET:
        raise DomainError(f"Q must have determinant 1, got {pt.det!r}")
    return classify_point(np.exp(x / np.sqrt(pt.n)) * pt.matrix)


def product_pushforward(Q, x, V, xi):
    """Differential of :func:`product_join` at ``(Q, x)`` applied to ``(V, xi)``.

    ``dF(V, xi) = e^{x/sqrt(n)} (V + xi / sqrt(n) * Q)`` for ``V`` tangent to
    ``SLP_n`` at ``Q``.
    """
    Qm = as_matrix(Q)
    n = Qm.shape[0]
    return np.exp(x / np.sqrt(n)) * (np.asarray(V, dtype=float) + xi / np.sqrt(n) * Qm)


def negate(A):
    """The isometry ``A -> -A`` from ``GLSym_n(p)`` onto ``GLSym_n(n-p)``."""
    pt = classify_point(A)
    n = pt.n
    det = (-1.0) ** n * pt.det
    return ManifoldPoint(np.array(-pt.matrix), n - pt.p, det, abs(det - (-1.0) ** pt.p) < TOL_DET)
