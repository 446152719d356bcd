"""Dense matrix numerics used by every geometric routine.

Everything here works on plain ``numpy.ndarray`` objects of shape ``(n, n)``.
Symmetric inputs are validated with :func:`as_symmetric`; general matrices
are only checked for shape.

The symmetric eigensolver is a cyclic Jacobi method and the matrix exponential
is a scaling-and-squaring Taylor scheme. Both are deliberately simple: the
matrices handled by this package are small (n <= 16 in practice) and the
algorithms are easy to audit against their defining series.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import ArgumentError, DomainError, IterationError

TOL_ORTHO = 1e-12
TOL_RECON = 1e-10
TOL_PD = 1e-12  # relative to max |eigenvalue|
TOL_LOG = 1e-9
TOL_SYM = 1e-12

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 50
EXPM_SCALE_TARGET = 0.5
EXPM_TERM_TOL = 1e-18
EXPM_MAX_TERMS = 60


class Signature(NamedTuple):
    """Counts of positive (``p``) and negative (``q``) eigenvalues."""

    p: int
    q: int


def _square(A, name="matrix"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ArgumentError(f"{name} must be a square 2-D array, got shape {A.shape}")
    if A.shape[0] < 2:
        raise ArgumentError(f"{name} must have order n >= 2, got {A.shape[0]}")
    if not np.all(np.isfinite(A)):
        raise ArgumentError(f"{name} has non-finite entries")
    return A


def sym(X):
    """Return the symmetric part ``(X + X^T) / 2``."""
    X = np.asarray(X, dtype=float)
    return 0.5 * (X + X.T)


def as_symmetric(A, tol=TOL_SYM):
    """Validate ``A`` as a real symmetric matrix and return an exactly symmetric copy.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Candidate matrix, ``n >= 2``.
    tol : float
        Largest accepted ``||A - A^T||_F / ||A||_F``.

    Returns
    -------
    ndarray, shape (n, n)
        ``(A + A^T) / 2``, bit-for-bit symmetric.

    Raises
    ------
    ArgumentError
        If ``A`` is not square, has order < 2, or is not symmetric within ``tol``.
    """
    A = _square(A)
    scale = np.linalg.norm(A)
    if np.linalg.norm(A - A.T) > tol * max(scale, np.finfo(float).tiny):
        raise ArgumentError("matrix is not symmetric")
    return sym(A)


def canonical_form(n, p):
    """``J_p = diag(I_p, -I_{n-p})``."""
    if not 0 <= p <= n:
        raise ArgumentError(f"signature index p={p} outside [0, {n}]")
    return np.diag(np.concatenate([np.ones(p), -np.ones(n - p)]))


def _offdiag_norm(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def _normalize_columns(Q):
    # deterministic eigenvector signs: first significant component positive
    for k in range(Q.shape[1]):
        col = Q[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size and col[idx[0]] < 0:
            Q[:, k] = -col
    return Q


def eig_sym(A, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Symmetric matrix.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm drops below
        ``tol * ||A||_F``.
    max_sweeps : int
        Upper bound on full cyclic sweeps.

    Returns
    -------
    Q : ndarray, shape (n, n)
        Orthogonal matrix whose columns are eigenvectors; each column has its
        first significant entry positive.
    lam : ndarray, shape (n,)
        Eigenvalues in ascending order, ``A = Q diag(lam) Q^T``.

    Raises
    ------
    IterationError
        If the off-diagonal mass is still above threshold after ``max_sweeps``.
    """
    a = as_symmetric(A).copy()
    n = a.shape[0]
    v = np.eye(n)
    target = tol * np.linalg.norm(a)

    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        if _offdiag_norm(a) > target:
            raise IterationError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")

    lam = np.diag(a).copy()
    order = np.argsort(lam, kind="stable")
    return _normalize_columns(v[:, order]), lam[order]


def _norm1(X):
    return np.abs(X).sum(axis=0).max()


def expm(C):
    """Matrix exponential by scaling and squaring with a truncated Taylor series.

    ``C`` is scaled by ``2**-s`` so that its 1-norm is at most 0.5, the series
    is summed until a term's 1-norm falls below 1e-18, and the result is
    squared ``s`` times. ``expm(0)`` returns the identity exactly.
    """
    C = _square(C)
    n = C.shape[0]
    norm = _norm1(C)
    s = 0
    if norm > EXPM_SCALE_TARGET:
        s = int(np.ceil(np.log2(norm / EXPM_SCALE_TARGET)))
    X = C / 2.0**s

    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, EXPM_MAX_TERMS + 1):
        term = term @ X / k
        result = result + term
        if _norm1(term) < EXPM_TERM_TOL:
            break
    for _ in range(s):
        result = result @ result
    return result


def _check_positive(lam, what):
    bound = TOL_PD * np.max(np.abs(lam))
    if np.any(lam <= bound):
        raise DomainError(f"{what} has a non-positive eigenvalue (min {lam.min():.3e})")


def _spectral(A, fun, what="matrix"):
    # f(A) for SPD A through its eigendecomposition
    Q, lam = eig_sym(A)
    _check_positive(lam, what)
    return sym((Q * fun(lam)) @ Q.T)


def sqrt_spd(A):
    """Principal square root of an SPD matrix.

    Raises
    ------
    DomainError
        If some eigenvalue of ``A`` is not above ``1e-12 * max|lambda|``.
    """
    return _spectral(A, np.sqrt, "SPD input")


def inv_sqrt_spd(A):
    """``A^{-1/2}`` for SPD ``A``."""
    return _spectral(A, lambda lam: 1.0 / np.sqrt(lam), "SPD input")


def inv_spd(A):
    return _spectral(A, lambda lam: 1.0 / lam, "SPD input")


def log_spd(A):
    """Logarithm of an SPD matrix (symmetric result)."""
    return _spectral(A, np.log, "SPD input")


def log_spd_pair(A, B):
    """``LOG(A^{-1} B)`` for SPD ``A`` and ``B``.

    ``A^{-1} B`` is never diagonalized directly. It is similar to the SPD
    matrix ``S = A^{-1/2} B A^{-1/2} = Q diag(mu) Q^T``, so
    ``LOG(A^{-1} B) = A^{-1/2} Q diag(log mu) Q^T A^{1/2}``.
    """
    Ah = sqrt_spd(A)
    Aih = inv_sqrt_spd(A)
    B = as_symmetric(B)
    Q, mu = eig_sym(sym(Aih @ B @ Aih))
    _check_positive(mu, "A^{-1/2} B A^{-1/2}")
    return Aih @ ((Q * np.log(mu)) @ Q.T) @ Ah


def log_principal(M=None, *, pair=None, witness=None):
    """Principal logarithm of a real-diagonalizable matrix with positive spectrum.

    Three routes are supported:

    * ``pair=(A, B)`` with both SPD: returns ``LOG(A^{-1} B)`` via
      :func:`log_spd_pair`; ``M`` may be omitted.
    * ``M`` symmetric: diagonalized directly with :func:`eig_sym`.
    * ``witness=W`` SPD such that ``W M`` is symmetric: ``T = W^{1/2} M W^{-1/2}``
      is symmetric, and ``LOG(M) = W^{-1/2} LOG(T) W^{1/2}``. For
      ``M = A^{-1} B`` the witness is ``A``.

    Any other input is rejected: general real diagonalization is not attempted.

    Raises
    ------
    DomainError
        Non-positive eigenvalue, or no route applies to ``M``.
    """
    if pair is not None:
        return log_spd_pair(*pair)
    M = _square(M, "M")
    if witness is None:
        if np.linalg.norm(M - M.T) > TOL_SYM * max(np.linalg.norm(M), np.finfo(float).tiny):
            raise DomainError(
                "non-symmetric M needs an SPD pair or witness to be diagonalized"
            )
        Q, lam = eig_sym(sym(M))
        _check_positive(lam, "M")
        return (Q * np.log(lam)) @ Q.T

    Wh = sqrt_spd(witness)
    Wih = inv_sqrt_spd(witness)
    T = Wh @ M @ Wih
    if np.linalg.norm(T - T.T) > TOL_RECON * np.linalg.norm(T):
        raise DomainError("M is not self-adjoint with respect to the supplied witness")
    Q, lam = eig_sym(sym(T))
    _check_positive(lam, "M")
    return Wih @ ((Q * np.log(lam)) @ Q.T) @ Wh


def power_frac(M=None, r=0.5, *, pair=None, witness=None):
    """``M^r = expm(r LOG(M))``; same input routes as :func:`log_principal`."""
    L = log_principal(M, pair=pair, witness=witness)
    return expm(r * L)


def polar_decompose(A):
    """Polar decomposition ``A = U Q`` with ``U`` orthogonal and ``Q`` SPD.

    ``Q = (A^T A)^{1/2}`` and ``U = A Q^{-1}``; both factors come from one
    eigendecomposition of ``A^T A``.

    Raises
    ------
    DomainError
        If ``A`` is singular (relative to ``1e-12``).
    """
    A = _square(A)
    V, lam = eig_sym(sym(A.T @ A))
    if lam[0] <= TOL_PD * lam[-1]:
        raise DomainError("polar decomposition of a singular matrix")
    root = np.sqrt(lam)
    Q = sym((V * root) @ V.T)
    U = A @ ((V / root) @ V.T)
    return U, Q


def signature_of(A):
    """Signature ``(p, q)`` of a non-singular symmetric matrix.

    Raises
    ------
    DomainError
        If an eigenvalue lies within ``1e-12 * max|lambda|`` of zero.
    """
    _, lam = eig_sym(A)
    return _signature_from_eigs(lam)


def _signature_from_eigs(lam):
    bound = TOL_PD * np.max(np.abs(lam))
    if np.any(np.abs(lam) <= bound):
        raise DomainError("matrix is singular or nearly singular")
    p = int(np.count_nonzero(lam > 0))
    return Signature(p, lam.size - p)


def det_sym(A):
    """Determinant of a symmetric matrix as the product of its eigenvalues."""
    _, lam = eig_sym(A)
    return float(np.prod(lam))


def congruence_to_canonical(A):
    """Find ``C`` with ``C A C^T = J_p``.

    With ``A = Q diag(lam) Q^T``, ``C = P |diag(lam)|^{-1/2} Q^T`` where the
    permutation ``P`` lists positive eigenvalues first. Both blocks keep the
    ascending eigenvalue order (stable sort).

    Returns
    -------
    C : ndarray, shape (n, n)
    p : int
        Number of positive eigenvalues of ``A``.
    """
    Q, lam = eig_sym(A)
    p = _signature_from_eigs(lam).p
    perm = np.argsort(lam <= 0, kind="stable")
    C = (Q[:, perm] / np.sqrt(np.abs(lam[perm]))).T
    return C, p
