"""
Cross-checking closed forms with a coordinate oracle
====================================================

The oracle knows only the metric in upper-triangle coordinates. From it we
difference Christoffel symbols, integrate geodesics with RK4 and build the
Riemann tensor, then compare with the closed forms.
"""

import numpy as np

from tracemetric import curvature, geodesics, oracle, sampling

rng = np.random.default_rng(3)
chart = oracle.Chart(3)

######################################################################
# Geodesics
# ---------

K = sampling.random_spd(3, rng)
V = sampling.random_tangent(3, rng)
V /= np.sqrt(np.trace(np.linalg.solve(K, V) @ np.linalg.solve(K, V)))
times, path, _ = oracle.integrate_batch(chart.encode(K)[None], chart.encode(V)[None], 1.0, steps=2000)
geo = geodesics.geodesic_from_tangent(K, V)
dev = max(np.linalg.norm(chart.decode(path[i, 0]) - geo(t).matrix) for i, t in enumerate(times))
print("sup deviation / |K|:", dev / np.linalg.norm(K))

######################################################################
# Riemann tensor
# --------------

A = sampling.random_spd(3, rng)
fd = oracle.riemann_fd(chart.encode(A))
ref = curvature.riemann_tensor(A, chart.basis())
print("relative error:", np.abs(fd - ref).max() / np.abs(ref).max())
