"""Differential geometry of the trace metric computed from coordinates alone.

The global chart of ``Sym_n`` uses the upper-triangle entries ``a_ij``
(``i <= j``) as coordinates, so the coordinate vector fields are ``E(i,i)``
and ``E(i,j) + E(j,i)``. Starting from nothing but the Gram matrix of
``g_A(V, W) = tr(A^{-1} V A^{-1} W)`` in that basis, this module builds
Christoffel symbols and the Riemann tensor by central differences and
integrates the geodesic equation with classical RK4.

None of this calls the closed-form geodesic or curvature code; it exists to
check it.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ArgumentError, DomainError, IntegrationError

DEFAULT_H = 1e-4
DEFAULT_STEPS = 2000
TOL_PD = 1e-12


@dataclass(frozen=True)
class Chart:
    """Upper-triangle coordinates on ``Sym_n``; slot ``k`` holds entry ``(rows[k], cols[k])``."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ArgumentError("chart order must be >= 2")

    @property
    def dim(self):
        return self.n * (self.n + 1) // 2

    @property
    def index(self):
        return np.triu_indices(self.n)

    def encode(self, S):
        S = np.asarray(S, dtype=float)
        return S[self.index].copy()

    def decode(self, x):
        x = np.asarray(x, dtype=float)
        S = np.zeros(x.shape[:-1] + (self.n, self.n))
        r, c = self.index
        S[..., r, c] = x
        S[..., c, r] = x
        return S

    def basis(self):
        """Coordinate vector fields as a ``(dim, n, n)`` stack."""
        return self.decode(np.eye(self.dim))

    @classmethod
    def for_dim(cls, dim):
        n = int(round((np.sqrt(8 * dim + 1) - 1) / 2))
        if n * (n + 1) // 2 != dim:
            raise ArgumentError(f"{dim} is not a triangular number")
        return cls(n)


@dataclass
class ODEState:
    position: np.ndarray = field(repr=False)
    velocity: np.ndarray = field(repr=False)
    t: float = 0.0


def _chart_for(x, chart):
    return chart if chart is not None else Chart.for_dim(np.shape(x)[-1])


def _check_points(P):
    lam = np.linalg.eigvalsh(P)
    absl = np.abs(lam)
    if np.any(absl.min(axis=-1) <= TOL_PD * absl.max(axis=-1)):
        raise DomainError("chart point is singular or nearly singular")


def _grams(P, basis):
    # Gram matrices of the metric at a stack of points P (m, n, n)
    Pinv = np.linalg.inv(P)
    X = Pinv[:, None, :, :] @ basis[None, :, :, :]
    return np.einsum("mkij,mlji->mkl", X, X)


def metric_gram_at(x, chart=None, basis=None):
    """Gram matrix of ``g`` at the decoded point ``x``.

    Parameters
    ----------
    x : array_like, shape (dim,)
        Chart coordinates.
    chart : Chart, optional
        Inferred from ``len(x)`` when omitted.
    basis : ndarray, shape (k, n, n), optional
        Tangent vectors to pair; defaults to the chart's coordinate fields.
    """
    chart = _chart_for(x, chart)
    P = chart.decode(x)[None]
    _check_points(P)
    B = chart.basis() if basis is None else np.asarray(basis, dtype=float)
    return _grams(P, B)[0]


def _christoffel_batch(X, h, chart):
    # Christoffel symbols at a stack of coordinate points X (m, dim)
    d = chart.dim
    m = X.shape[0]
    shifts = np.concatenate([np.eye(d), -np.eye(d), np.zeros((1, d))]) * h
    P = chart.decode(X[:, None, :] + shifts[None])
    _check_points(P[:, -1])
    G = _grams(P.reshape(-1, chart.n, chart.n), chart.basis()).reshape(m, 2 * d + 1, d, d)
    g = G[:, -1]
    dg = (G[:, :d] - G[:, d : 2 * d]) / (2.0 * h)
    # dg[m, a, k, l] = d_a g_kl; first[m, l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    first = 0.5 * (
        np.einsum("mijl->mlij", dg) + np.einsum("mjil->mlij", dg) - dg
    )
    return np.linalg.solve(g, first.reshape(m, d, d * d)).reshape(m, d, d, d)


def christoffel_fd(x, h=DEFAULT_H, chart=None):
    """Christoffel symbols ``Gamma[k, i, j]`` at ``x`` from a differenced metric.

    ``Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)``. A stack of
    points of shape ``(m, dim)`` gives a stack of symbols.

    Raises
    ------
    DomainError
        If the point is singular or nearly singular.
    """
    if not h > 0:
        raise ArgumentError("finite-difference step must be positive")
    chart = _chart_for(x, chart)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return _christoffel_batch(x[None], h, chart)[0]
    return _christoffel_batch(x, h, chart)


def connection_value(x, V, W, h=DEFAULT_H, chart=None):
    """Decoded ``Gamma(V, W)`` for symmetric ``V``, ``W`` at the point ``x``."""
    chart = _chart_for(x, chart)
    gam = christoffel_fd(x, h, chart)
    v = chart.encode(V)
    w = chart.encode(W)
    return chart.decode(np.einsum("kij,i,j->k", gam, v, w))


def _rhs(x, v, h, chart):
    gam = _christoffel_batch(x, h, chart)
    return v, -np.einsum("mkij,mi,mj->mk", gam, v, v)


def integrate_batch(positions, velocities, t_end, t0=0.0, steps=DEFAULT_STEPS, h=DEFAULT_H, chart=None):
    """RK4 for many geodesics at once.

    Parameters
    ----------
    positions, velocities : ndarray, shape (m, dim)
        Initial chart coordinates and velocities.
    t_end, t0 : float
        Integration interval.

    Returns
    -------
    times : ndarray, shape (steps + 1,)
    path : ndarray, shape (steps + 1, m, dim)
        Positions at every step.
    final_velocity : ndarray, shape (m, dim)

    Raises
    ------
    IntegrationError
        If any trajectory reaches a (nearly) singular matrix.
    """
    if steps < 1:
        raise ArgumentError("steps must be >= 1")
    x = np.atleast_2d(np.array(positions, dtype=float))
    v = np.atleast_2d(np.array(velocities, dtype=float))
    chart = _chart_for(x, chart)
    dt = (t_end - t0) / steps
    path = np.empty((steps + 1,) + x.shape)
    path[0] = x
    k = 0
    try:
        for k in range(steps):
            k1x, k1v = _rhs(x, v, h, chart)
            k2x, k2v = _rhs(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v, h, chart)
            k3x, k3v = _rhs(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v, h, chart)
            k4x, k4v = _rhs(x + dt * k3x, v + dt * k3v, h, chart)
            x = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
            v = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
            path[k + 1] = x
    except DomainError as exc:
        raise IntegrationError(f"trajectory left the non-singular region near t={t0 + k * dt}") from exc
    return t0 + dt * np.arange(steps + 1), path, v


def integrate_geodesic(start, t_end, steps=DEFAULT_STEPS, h=DEFAULT_H, chart=None, record=False):
    """Integrate ``x'' = -Gamma(x)(x', x')`` with classical RK4.

    Parameters
    ----------
    start : ODEState
        Initial coordinates, velocity and time.
    t_end : float
        Final time; may be smaller than ``start.t``.
    steps : int
        Number of equal RK4 steps.
    h : float
        Metric differencing step.
    record : bool
        Also return the list of visited positions as ODEStates (velocity is
        only kept for the final state).

    Raises
    ------
    IntegrationError
        If the trajectory reaches a (nearly) singular matrix.
    """
    times, path, v = integrate_batch(
        np.asarray(start.position)[None], np.asarray(start.velocity)[None],
        t_end, float(start.t), steps, h, chart,
    )
    final = ODEState(path[-1, 0], v[0], float(t_end))
    if not record:
        return final
    states = [ODEState(path[i, 0], None, float(t)) for i, t in enumerate(times[:-1])]
    return final, states + [final]


def riemann_fd(x, h=DEFAULT_H, chart=None):
    """(0,4) Riemann tensor over the chart's coordinate fields.

    ``R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk
    - Gamma^l_jm Gamma^m_ik`` (the components of ``R(d_i, d_j) d_k``), lowered
    with the Gram matrix. The returned array ``T[a, b, c, d]`` uses the index
    order for which ``T[a, b, a, b]`` divided by the Gram determinant of
    ``(d_a, d_b)`` is the sectional curvature.
    """
    chart = _chart_for(x, chart)
    d = chart.dim
    x = np.asarray(x, dtype=float)
    gam = christoffel_fd(x, h, chart)
    shifted = _christoffel_batch(x[None] + np.concatenate([np.eye(d), -np.eye(d)]) * h, h, chart)
    dgam = (shifted[:d] - shifted[d:]) / (2.0 * h)
    # dgam[i, l, j, k] = d_i Gamma^l_jk
    R = (
        np.einsum("iljk->lkij", dgam)
        - np.einsum("jlik->lkij", dgam)
        + np.einsum("lim,mjk->lkij", gam, gam)
        - np.einsum("ljm,mik->lkij", gam, gam)
    )
    g = metric_gram_at(x, chart)
    # Rm[i, j, k, w] = <R(d_i, d_j) d_k, d_w> = g_lw R^l_kij
    Rm = np.einsum("lw,lkij->ijkw", g, R)
    return Rm.transpose(0, 1, 3, 2)
