"""
Identifying an isometry from samples
====================================

Every isometry of the SPD cone is ``Gamma_M``, possibly followed by the
inversion ``phi`` and the scaling ``psi``. Given only a black-box map,
``identify`` recovers the triple ``(M, a, b)`` and checks it on a probe.
"""

import numpy as np

from tracemetric import isometry, sampling
from tracemetric.exceptions import NotAnIsometryError

rng = np.random.default_rng(2)

######################################################################
# Words and canonical forms
# -------------------------
#
# Words compose right to left; canonicalization pushes every congruence to
# the left.

C = sampling.random_gl(3, rng)
word = isometry.IsometryWord([isometry.PSI, isometry.Congr(C), isometry.INV])
canon = isometry.canonicalize(word)
print("family:", canon.family)
A = sampling.random_spd(3, rng)
print("word vs canonical:", np.linalg.norm(word(A) - canon(A)))

######################################################################
# Black-box identification
# ------------------------

secret = isometry.CanonicalIsometry(sampling.random_gl(4, rng), 1, 1)
found = isometry.identify(secret, 4, seed=0)
print("flags:", (found.a, found.b), "M error:", np.linalg.norm(found.M - secret.M))

######################################################################
# A map that is not an isometry is rejected by the final probe.

try:
    isometry.identify(lambda X: X @ X, 3)
except NotAnIsometryError as exc:
    print("rejected:", exc)

######################################################################
# In dimension 2, ``psi`` is a congruence after inversion, so the ``psi``
# flag is always absorbed.

psi2 = isometry.CanonicalIsometry(np.eye(2), 0, 1)
print("n=2 psi ->", psi2.family, psi2.M.tolist())
