"""Isometries of the SPD cone under the trace metric.

Every isometry is one of ``Gamma_M``, ``Gamma_M o phi``, ``Gamma_M o psi`` or
``Gamma_M o phi o psi`` where

* ``Gamma_M(A) = M A M^T`` (congruence),
* ``phi(A) = A^{-1}`` (inversion),
* ``psi(A) = |det A|^{-2/n} A``.

:class:`CanonicalIsometry` stores the triple ``(M, a, b)`` for
``Gamma_M o phi^a o psi^b``. Words over the generators are composed
right-to-left like ordinary maps: ``IsometryWord([INV, Congr(C)])`` is
``A -> (C A C^T)^{-1}``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import symcore
from .exceptions import ArgumentError, DomainError, NotAnIsometryError
from .manifold import as_matrix, classify_point, product_split, require_spd
from .sampling import random_spd

TOL_ID = 1e-6
FD_STEP = 1e-5
TOL_STRUCT = 1e-4  # eigenvalue mismatch allowed when reading the tangent action

# rotation by 90 degrees; phi on SLP_2 equals the congruence by W
W2 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class Congr:
    """Generator letter ``Gamma_C``."""

    C: np.ndarray = field(repr=False)

    def __post_init__(self):
        C = np.array(self.C, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ArgumentError(f"congruence matrix must be square, got shape {C.shape}")
        if abs(np.linalg.det(C)) <= 1e-14 * max(np.abs(C).max(), 1.0) ** C.shape[0]:
            raise DomainError("congruence by a singular matrix")
        C.setflags(write=False)
        object.__setattr__(self, "C", C)

    def __repr__(self):
        return f"Congr(n={self.C.shape[0]})"


class _Generator:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


INV = _Generator("Inv")
PSI = _Generator("Psi")


def _psi(A):
    n = A.shape[0]
    _, logdet = np.linalg.slogdet(A)
    return A * np.exp(-2.0 * logdet / n)


def _normalize_sign(M):
    flat = M.ravel()
    idx = np.flatnonzero(np.abs(flat) > 1e-12 * np.abs(flat).max())
    # + 0.0 clears negative zeros
    return (-M if flat[idx[0]] < 0 else M) + 0.0


@dataclass(frozen=True)
class CanonicalIsometry:
    """The isometry ``A -> M phi^a(psi^b(A)) M^T``.

    On construction ``M`` is normalized so its first non-negligible entry is
    positive (``Gamma_M = Gamma_{-M}``) and, for ``n = 2``, the flag ``b`` is
    absorbed using ``psi = Gamma_W o phi`` so that ``b == 0`` always.
    """

    M: np.ndarray = field(repr=False)
    a: int = 0
    b: int = 0

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        a, b = int(self.a) & 1, int(self.b) & 1
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 2:
            raise ArgumentError(f"M must be square of order >= 2, got shape {M.shape}")
        if M.shape[0] == 2 and b:
            M, a, b = M @ W2, a ^ 1, 0
        M = _normalize_sign(M)
        M.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n), 0, 0)

    @property
    def n(self):
        return self.M.shape[0]

    @property
    def family(self):
        return {(0, 0): "congr", (1, 0): "inv", (0, 1): "psi", (1, 1): "inv-psi"}[(self.a, self.b)]

    def __call__(self, A):
        return _apply_canonical(self, as_matrix(A))

    def __repr__(self):
        return f"CanonicalIsometry(n={self.n}, a={self.a}, b={self.b}, M={self.M.tolist()})"


@dataclass(frozen=True)
class IsometryWord:
    """Composition of generator letters, leftmost applied last."""

    letters: tuple = ()

    def __post_init__(self):
        letters = tuple(self.letters)
        for letter in letters:
            if not (isinstance(letter, Congr) or letter is INV or letter is PSI):
                raise ArgumentError(f"unknown isometry letter {letter!r}")
        object.__setattr__(self, "letters", letters)

    @property
    def n(self):
        for letter in self.letters:
            if isinstance(letter, Congr):
                return letter.C.shape[0]
        return None

    def __call__(self, A):
        return _apply_word(self, as_matrix(A))


def _apply_canonical(iso, A):
    X = A
    if iso.b:
        X = _psi(X)
    if iso.a:
        X = symcore.inv_spd(X)
    return symcore.sym(iso.M @ X @ iso.M.T)


def _apply_word(word, A):
    X = A
    for letter in reversed(word.letters):
        if letter is INV:
            X = symcore.inv_spd(X)
        elif letter is PSI:
            X = _psi(X)
        else:
            X = symcore.sym(letter.C @ X @ letter.C.T)
    return X


def apply(iso, A):
    """Apply a word or canonical isometry to an SPD matrix.

    Returns
    -------
    ManifoldPoint
        The image, again SPD.
    """
    pt = require_spd(A)
    if isinstance(iso, IsometryWord):
        return classify_point(_apply_word(iso, pt.matrix))
    if isinstance(iso, CanonicalIsometry):
        return classify_point(_apply_canonical(iso, pt.matrix))
    raise ArgumentError(f"cannot apply {type(iso).__name__}")


def _letter_canonical(letter, n):
    if letter is INV:
        return CanonicalIsometry(np.eye(n), 1, 0)
    if letter is PSI:
        return CanonicalIsometry(np.eye(n), 0, 1)
    return CanonicalIsometry(letter.C, 0, 0)


def compose(f, g):
    """Canonical form of ``f o g``.

    Uses ``psi o Gamma_C = Gamma_{|det C|^{-2/n} C} o psi``,
    ``phi o Gamma_C = Gamma_{C^{-T}} o phi`` and the fact that ``phi`` and
    ``psi`` commute and are involutions, so the flags add mod 2.
    """
    if f.n != g.n:
        raise ArgumentError(f"order mismatch: {f.n} vs {g.n}")
    n = f.n
    X = np.array(g.M)
    if f.b:
        X = X * abs(np.linalg.det(X)) ** (-2.0 / n)
    if f.a:
        X = np.linalg.inv(X).T
    return CanonicalIsometry(f.M @ X, f.a ^ g.a, f.b ^ g.b)


def canonicalize(word, n=None):
    """Reduce a word over ``{Congr(C), INV, PSI}`` to its canonical triple.

    Parameters
    ----------
    word : IsometryWord or sequence of letters
    n : int, optional
        Matrix order; required only if the word has no ``Congr`` letter.
    """
    if not isinstance(word, IsometryWord):
        word = IsometryWord(tuple(word))
    n = word.n or n
    if n is None:
        raise ArgumentError("matrix order n is required for a word without congruences")
    result = CanonicalIsometry.identity(n)
    for letter in reversed(word.letters):
        result = compose(_letter_canonical(letter, n), result)
    return result


def geodesic_symmetry_at(Q):
    """The geodesic symmetry ``A -> Q A^{-1} Q`` fixing ``Q``, as ``(Q, 1, 0)``."""
    pt = require_spd(Q)
    return CanonicalIsometry(pt.matrix, 1, 0)


def identify(oracle, n, seed=0, tol=TOL_ID, probe_size=50, h=FD_STEP):
    """Recover ``(M, a, b)`` for a black-box isometry of the SPD cone.

    Parameters
    ----------
    oracle : callable
        Maps an ``(n, n)`` SPD array to an SPD array (or ManifoldPoint).
    n : int
        Matrix order.
    seed : int
        Seed for the verification probe.
    tol : float
        Relative Frobenius mismatch tolerated on the probe.
    probe_size : int
        Number of random SPD probe points.
    h : float
        Step of the central differences used to read the tangent action.

    Returns
    -------
    CanonicalIsometry

    Raises
    ------
    NotAnIsometryError
        If any structural reading is inconsistent with an isometry or the
        recovered map disagrees with the oracle on the probe.

    Notes
    -----
    The oracle is decomposed through ``P_n = SLP_n x R``:

    1. The determinant coordinate ``x = ln det / sqrt(n)`` is mapped as
       ``x -> sigma x + beta`` with ``sigma = (-1)^(a+b)``.
    2. On ``SLP_n`` the map is ``Gamma_X o phi^a`` with ``X = P U``,
       ``P = G(I)^{1/2}``, ``U`` orthogonal.
    3. The tangent action of ``Gamma_{P^-1} o G`` at ``I`` is ``+-U X U^T``;
       the sign gives ``a`` (for ``n >= 3``) and the eigenvectors of the
       image of a diagonal direction give ``U`` up to column signs, fixed by
       the images of the off-diagonal units ``S(1, j)``.
    4. ``M = e^{beta / (2 sqrt n)} P U`` and ``b = a xor (sigma == -1)``.

    For ``n = 2`` inversion restricted to ``SLP_2`` is a congruence, so ``a``
    is read as 0 there and the canonical ``b = 0`` form is returned.
    """
    if n < 2:
        raise ArgumentError("n must be >= 2")
    rng = np.random.default_rng(seed)
    eye = np.eye(n)
    sqrt_n = np.sqrt(n)

    def call(A):
        try:
            out = as_matrix(oracle(np.array(A)))
            return require_spd(symcore.as_symmetric(out, tol=1e-9)).matrix
        except (DomainError, ArgumentError) as exc:
            raise NotAnIsometryError(f"oracle output is not an SPD matrix: {exc}") from exc

    L0 = call(eye)
    Q0, beta = product_split(L0)
    _, x1 = product_split(call(np.exp(1.0 / sqrt_n) * eye))
    sigma = x1 - beta
    if abs(abs(sigma) - 1.0) > tol:
        raise NotAnIsometryError(f"determinant action has slope {float(sigma):.6g}, expected +-1")
    flip = sigma < 0

    P = symcore.sqrt_spd(Q0.matrix)
    Pinv = symcore.inv_spd(P)

    def H(Q):
        G = product_split(call(Q))[0].matrix
        return Pinv @ G @ Pinv

    def dH(X):
        return symcore.sym((H(symcore.expm(h * X)) - H(symcore.expm(-h * X))) / (2.0 * h))

    a = 0
    if n >= 3:
        X0 = np.diag([n - 1.0] + [-1.0] * (n - 1))
        X0 /= np.linalg.norm(X0)
        _, ev = symcore.eig_sym(dH(X0))
        ref = np.linalg.eigvalsh(X0)
        err_plus = np.linalg.norm(ev - ref)
        err_minus = np.linalg.norm(ev - np.sort(-ref))
        a = int(err_minus < err_plus)
        if min(err_plus, err_minus) > TOL_STRUCT:
            raise NotAnIsometryError("tangent action at the identity is not +-(orthogonal congruence)")
    sgn = -1.0 if a else 1.0

    D0 = np.diag(np.arange(n, dtype=float) - (n - 1) / 2.0)
    Qe, lam = symcore.eig_sym(sgn * dH(D0))
    if np.linalg.norm(lam - np.diag(D0)) > TOL_STRUCT:
        raise NotAnIsometryError("tangent action does not preserve the spectrum of a test direction")
    signs = np.ones(n)
    for j in range(1, n):
        S = np.zeros((n, n))
        S[0, j] = S[j, 0] = 1.0 / np.sqrt(2.0)
        val = Qe[:, 0] @ (sgn * dH(S)) @ Qe[:, j]
        if abs(abs(val) * np.sqrt(2.0) - 1.0) > TOL_STRUCT:
            raise NotAnIsometryError("off-diagonal tangent images are inconsistent with a congruence")
        signs[j] = np.sign(val)
    U = Qe * signs

    b = a ^ int(flip)
    M = np.exp(beta / (2.0 * sqrt_n)) * P @ U
    iso = CanonicalIsometry(M, a, b)

    for _ in range(probe_size):
        A = random_spd(n, rng)
        expect = call(A)
        got = _apply_canonical(iso, A)
        if np.linalg.norm(got - expect) > tol * np.linalg.norm(expect):
            raise NotAnIsometryError("recovered isometry disagrees with the oracle on the probe")
    return iso
