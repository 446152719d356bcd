"""
Distances, geodesics and means of SPD matrices
==============================================

A short walk through the two-point geometry of the SPD cone under the
trace metric ``g_A(V, W) = tr(A^-1 V A^-1 W)``.
"""

######################################################################
# Setup
# -----

import numpy as np

from tracemetric import geodesics, sampling

rng = np.random.default_rng(0)

######################################################################
# Distance
# --------
#
# The distance only sees the eigenvalues of ``A^-1 B``: it is the
# Euclidean norm of their logarithms.

I2 = np.eye(2)
B = np.diag([np.e, 1 / np.e])
print("d(I, diag(e, 1/e)) =", geodesics.distance(I2, B))

A = sampling.random_spd(3, rng)
C = sampling.random_spd(3, rng)
M = sampling.random_gl(3, rng)
print("d(A, C)            =", geodesics.distance(A, C))
print("d(MAM^T, MCM^T)    =", geodesics.distance(M @ A @ M.T, M @ C @ M.T))
print("d(A^-1, C^-1)      =", geodesics.distance(np.linalg.inv(A), np.linalg.inv(C)))

######################################################################
# Geodesics
# ---------
#
# The geodesic from ``A`` to ``B`` is ``A (A^-1 B)^t``. Between two diagonal
# matrices it interpolates each entry geometrically.

for t, P in zip([0.0, 0.25, 0.5, 0.75, 1.0], geodesics.interpolate(I2, np.diag([4.0, 9.0]), [0.0, 0.25, 0.5, 0.75, 1.0])):
    print(f"t={t:.2f}", np.round(np.diag(P), 6))

######################################################################
# Geometric mean and the transporter
# ----------------------------------
#
# The midpoint is the geometric mean. It sits at half the distance from both
# ends, unlike the arithmetic mean.

m = geodesics.geometric_mean(A, C).matrix
print("d(A, m), d(m, C) =", geodesics.distance(A, m), geodesics.distance(m, C))
arith = (A + C) / 2
print("arithmetic mean: ", geodesics.distance(A, arith), geodesics.distance(arith, C))

X = geodesics.congruence_transporter(A, C)
print("|X A X - C| =", np.linalg.norm(X @ A @ X - C))
