"""
Curvature of the trace metric
=============================

Sectional, Ricci and scalar curvature from the closed-form Riemann tensor,
on the SPD cone and on indefinite signatures.
"""

import numpy as np

from tracemetric import curvature, manifold, sampling

rng = np.random.default_rng(1)

######################################################################
# Sectional curvature
# -------------------
#
# On the SPD cone every plane has curvature ``<= 0``. Commuting directions
# span flat planes.

A = sampling.random_spd(3, rng)
vals = [curvature.sectional(A, sampling.random_tangent(3, rng), sampling.random_tangent(3, rng)) for _ in range(1000)]
print("max sectional curvature over 1000 planes:", max(vals))
print("flat plane:", curvature.sectional(np.eye(3), np.diag([1.0, 0, 0]), np.diag([0, 1.0, 0])))

######################################################################
# On unit-determinant 2x2 SPD matrices the curvature is constant.

Q = sampling.random_slsym(2, 2, rng)
X = manifold.project_tangent_sl(Q, sampling.random_tangent(2, rng)).value
Y = manifold.project_tangent_sl(Q, sampling.random_tangent(2, rng)).value
print("SLP_2 sectional:", curvature.sectional(Q, X, Y))

######################################################################
# Scalar curvature
# ----------------
#
# The summed contraction over an orthonormal frame gives the same constant
# at every point and in every signature.

for n in range(2, 6):
    for p in (0, n // 2, n):
        K = sampling.random_glsym(n, p, rng)
        print(f"n={n} p={p}: summed {curvature.scalar_at(K, 'summed'):+.12f}, closed form {curvature.scalar_closed_form(n):+.4f}")

######################################################################
# Einstein property
# -----------------
#
# On the unit-determinant slice the Ricci tensor is ``-(n/4) g`` on
# trace-free directions.

Q = sampling.random_slsym(4, 1, rng)
rep = curvature.einstein_check(Q, samples=200, seed=0)
print("Einstein residual on SLSym_4(1):", rep.einstein_residual)
