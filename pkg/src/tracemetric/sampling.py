"""Random test points with controlled conditioning.

All samplers take a ``numpy.random.Generator`` and never touch global state.
Conditioning is bounded by drawing singular values as ``exp(U(-spread, spread))``
so tolerances in the verification suites stay meaningful.
"""

import numpy as np

from .symcore import canonical_form, sym


def random_orthogonal(n, rng):
    """Haar-distributed orthogonal matrix (QR of a Gaussian, sign-corrected)."""
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * np.sign(np.diag(R))


def random_gl(n, rng, spread=0.5):
    """Non-singular matrix ``O1 diag(exp(s)) O2`` with ``|s_i| <= spread``."""
    s = np.exp(rng.uniform(-spread, spread, n))
    return (random_orthogonal(n, rng) * s) @ random_orthogonal(n, rng)


def random_sym(n, rng, low=-2.0, high=2.0):
    """Symmetric matrix with upper-triangle entries uniform in ``[low, high]``."""
    U = np.triu(rng.uniform(low, high, (n, n)))
    return U + np.triu(U, 1).T


def random_spd(n, rng, spread=1.0):
    """SPD matrix ``O diag(exp(s)) O^T`` with ``|s_i| <= spread``."""
    O = random_orthogonal(n, rng)
    return sym((O * np.exp(rng.uniform(-spread, spread, n))) @ O.T)


def random_glsym(n, p, rng, spread=0.5):
    """Point of ``GLSym_n(p)``: ``C J_p C^T`` for a random well-conditioned ``C``."""
    C = random_gl(n, rng, spread)
    return sym(C @ canonical_form(n, p) @ C.T)


def random_slsym(n, p, rng, spread=0.5):
    """Point of ``SLSym_n(p)``: :func:`random_glsym` rescaled to ``|det| = 1``."""
    A = random_glsym(n, p, rng, spread)
    _, logdet = np.linalg.slogdet(A)
    return A * np.exp(-logdet / n)


def random_tangent(n, rng, scale=1.0):
    """Symmetric matrix with Gaussian entries scaled to Frobenius norm ``scale``."""
    V = rng.standard_normal((n, n))
    V = V + V.T
    return scale * V / np.linalg.norm(V)
