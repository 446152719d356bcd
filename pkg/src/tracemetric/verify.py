"""Numerical verification suites.

Each ``check_*`` function runs one acceptance criterion and returns a
:class:`CheckResult`. Randomness comes from ``default_rng([seed, number])``
so a criterion gives the same numbers whether it runs alone, in a suite, or
in a worker process.

Suites group criteria by the module they exercise:

==========  ======================
suite       criteria
==========  ======================
curvature   1, 2, 3, 4, 12
oracle      5, 6
geodesic    7, 11
metric      8
isometry    9, 10
==========  ======================
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from . import curvature, geodesics, isometry, manifold, oracle, symcore
from .exceptions import ArgumentError, NotAnIsometryError
from .sampling import (
    random_gl,
    random_glsym,
    random_orthogonal,
    random_slsym,
    random_spd,
    random_sym,
    random_tangent,
)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one criterion.

    ``value`` is the worst observed statistic and ``threshold`` the bound it
    was compared against; ``seconds`` is wall time (not part of ``passed``).
    """

    number: int
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: worst {self.value:.3e} vs {self.threshold:.0e}; {self.detail}"


def _rng(seed, number):
    return np.random.default_rng([int(seed), number])


def _signatures(n, ps):
    return [p for p in range(n + 1) if ps is None or p in ps]


def _result(number, name, value, threshold, detail, passed=None):
    if passed is None:
        passed = bool(value <= threshold)
    return CheckResult(number, name, passed, float(value), threshold, detail)


def _trace_free(Q, rng):
    n = Q.shape[0]
    T = manifold.project_tangent_sl(Q, random_tangent(n, rng)).value
    return T / np.linalg.norm(np.linalg.solve(Q, T))


def check_scalar_curvature(seed=0, ns=(2, 3, 4, 5), ps=None, points=20):
    """Summed double contraction of the Riemann tensor against ``-(n-1)n(n+2)/8``."""
    rng = _rng(seed, 1)
    worst = 0.0
    parts = []
    for n in ns:
        closed = curvature.scalar_closed_form(n)
        last = closed
        for p in _signatures(n, ps):
            for _ in range(points):
                A = random_glsym(n, p, rng)
                last = curvature.scalar_at(A, "summed")
                worst = max(worst, abs(last - closed))
        parts.append(f"n={n} scalar {last:.17g} vs closed form {closed:.17g}")
    return _result(1, "scalar curvature", worst, 1e-8, "; ".join(parts))


def check_einstein(seed=0, ns=(2, 3, 4, 5), ps=None, points=10, pairs=200):
    """``|Ric(X,Z) + n/4 g(X,Z)|`` on ``SLSym_n(p)`` with Ricci contracted from Riemann."""
    rng = _rng(seed, 2)
    worst = 0.0
    count = 0
    for n in ns:
        for p in _signatures(n, ps):
            for _ in range(points):
                Q = random_slsym(n, p, rng)
                sub = int(rng.integers(2**31))
                rep = curvature.einstein_check(Q, samples=pairs, seed=sub, mode="summed")
                worst = max(worst, rep.einstein_residual)
                count += pairs
    return _result(2, "Einstein property", worst, 1e-10, f"{count} tangent pairs")


def check_slp2_sectional(seed=0, planes=100):
    """Every plane of ``SLP_2`` has sectional curvature -1/2."""
    rng = _rng(seed, 3)
    worst = 0.0
    for _ in range(planes):
        Q = random_slsym(2, 2, rng)
        X = _trace_free(Q, rng)
        Y = _trace_free(Q, rng)
        worst = max(worst, abs(curvature.sectional(Q, X, Y) + 0.5))
    return _result(3, "SLP_2 sectional curvature", worst, 1e-10, f"{planes} planes, expected -0.5")


def check_spd_sectional(seed=0, ns=(2, 3, 4, 5), planes=10_000):
    """Sectional curvature of random planes of the SPD cone is non-positive."""
    rng = _rng(seed, 4)
    top = -np.inf
    for n in ns:
        for _ in range(planes):
            A = random_spd(n, rng)
            top = max(top, curvature.sectional(A, random_tangent(n, rng), random_tangent(n, rng)))
    return _result(4, "SPD sectional curvature <= 0", top, 1e-12, f"{planes} planes per n, max {top:.3e}")


def check_geodesic_oracle(seed=0, ns=(2, 3), trajectories=50, steps=2000, samples=201):
    """Closed-form geodesics against RK4 integration of the geodesic equation.

    ``trajectories`` are split evenly over ``ns``. Velocities are scaled to
    unit speed, so each trajectory is a geodesic segment of length 1. The
    deviation is ``max_t ||gamma_rk4(t) - gamma(t)||_F / ||K||_F`` over
    ``samples`` equally spaced times in ``[0, 1]``.
    """
    rng = _rng(seed, 5)
    per_n = max(1, trajectories // len(ns))
    stride = max(1, steps // (samples - 1))
    worst = 0.0
    for n in ns:
        chart = oracle.Chart(n)
        Ks = [random_spd(n, rng) for _ in range(per_n)]
        Vs = [random_tangent(n, rng) for _ in range(per_n)]
        Vs = [V / np.sqrt(manifold.metric_eval(K, V, V)) for K, V in zip(Ks, Vs)]
        times, path, _ = oracle.integrate_batch(
            np.array([chart.encode(K) for K in Ks]),
            np.array([chart.encode(V) for V in Vs]),
            1.0, steps=steps, chart=chart,
        )
        for j, (K, V) in enumerate(zip(Ks, Vs)):
            geo = geodesics.geodesic_from_tangent(K, V)
            for i in range(0, steps + 1, stride):
                ref = geodesics.geodesic_matrix_at(geo, times[i])
                err = np.linalg.norm(chart.decode(path[i, j]) - ref) / np.linalg.norm(K)
                worst = max(worst, err)
    return _result(5, "geodesic vs RK4 oracle", worst, 1e-6, f"{per_n * len(ns)} trajectories, {steps} steps")


def check_riemann_oracle(seed=0, ns=(2, 3), points=20):
    """Closed-form Riemann tensor against the finite-difference oracle.

    Error is ``max |R_fd - R| / max |R|`` over all chart-basis components.
    """
    rng = _rng(seed, 6)
    worst = 0.0
    for n in ns:
        chart = oracle.Chart(n)
        for _ in range(points):
            A = random_spd(n, rng)
            fd = oracle.riemann_fd(chart.encode(A), chart=chart)
            ref = curvature.riemann_tensor(A, chart.basis())
            worst = max(worst, np.abs(fd - ref).max() / np.abs(ref).max())
    return _result(6, "Riemann vs finite-difference oracle", worst, 1e-4, f"{points} points per n")


def check_distance(seed=0, ns=(2, 3, 4, 5), triples=1000, maps=100):
    """Symmetry, triangle inequality, and invariance under congruence and inversion."""
    rng = _rng(seed, 7)
    sym_err = 0.0
    slack = np.inf
    for k in range(triples):
        n = ns[k % len(ns)]
        A, B, C = (random_spd(n, rng) for _ in range(3))
        dab = geodesics.distance(A, B)
        sym_err = max(sym_err, abs(dab - geodesics.distance(B, A)))
        slack = min(slack, dab + geodesics.distance(B, C) - geodesics.distance(A, C))
    inv_err = 0.0
    for k in range(maps):
        n = ns[k % len(ns)]
        A, B = random_spd(n, rng), random_spd(n, rng)
        M = random_gl(n, rng)
        d = geodesics.distance(A, B)
        inv_err = max(inv_err, abs(geodesics.distance(M @ A @ M.T, M @ B @ M.T) - d))
        inv_err = max(inv_err, abs(geodesics.distance(symcore.inv_spd(A), symcore.inv_spd(B)) - d))
    passed = sym_err <= 1e-12 and slack >= -1e-9 and inv_err <= 1e-9
    detail = f"symmetry {sym_err:.3e}, triangle slack {slack:.3e}, invariance {inv_err:.3e}"
    return _result(7, "distance axioms and invariance", max(sym_err, -slack, inv_err), 1e-9, detail, passed)


def check_product(seed=0, ns=(2, 3, 4, 5), pairs=500):
    """``F(Q, x) = e^{x/sqrt n} Q`` pulls ``g`` back to ``g x h``; ``F o F^-1 = id``."""
    rng = _rng(seed, 8)
    pull = 0.0
    trip = 0.0
    for k in range(pairs):
        n = ns[k % len(ns)]
        A = random_spd(n, rng)
        Q, x = manifold.product_split(A)
        trip = max(trip, np.linalg.norm(manifold.product_join(Q, x).matrix - A) / np.linalg.norm(A))
        V1, V2 = _trace_free(Q.matrix, rng), _trace_free(Q.matrix, rng)
        xi1, xi2 = rng.standard_normal(2)
        P = manifold.product_join(Q, x).matrix
        lhs = manifold.metric_eval(
            P,
            manifold.product_pushforward(Q, x, V1, xi1),
            manifold.product_pushforward(Q, x, V2, xi2),
        )
        rhs = manifold.metric_eval(Q, V1, V2) + xi1 * xi2
        pull = max(pull, abs(lhs - rhs))
    passed = pull <= 1e-9 and trip <= 1e-12
    detail = f"pullback {pull:.3e}, round trip {trip:.3e}"
    return _result(8, "product decomposition", max(pull, trip), 1e-9, detail, passed)


def _fixed_points(Q, rng, starts):
    # least-squares search for X = L L^T with Q X^-1 Q = X
    n = Q.shape[0]
    rows, cols = np.tril_indices(n)
    scale = np.linalg.norm(Q)

    def build(y):
        L = np.zeros((n, n))
        L[rows, cols] = y
        return L @ L.T

    def resid(y):
        X = build(y)
        return (Q @ np.linalg.solve(X, Q) - X)[np.triu_indices(n)] / scale

    found = []
    for _ in range(starts):
        L0 = np.linalg.cholesky(random_spd(n, rng, spread=1.5))
        sol = least_squares(resid, L0[rows, cols], xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.linalg.norm(sol.fun) < 1e-10:
            found.append(build(sol.x))
    return found


def check_geodesic_symmetry(seed=0, ns=(2, 3, 4, 5), ps=None, geodesics_count=100, fuzz_points=10, starts=10):
    """``phi_Q(A) = Q A^-1 Q`` reverses geodesics through ``Q``; its only SPD fixed point is ``Q``."""
    rng = _rng(seed, 9)
    rev = 0.0
    combos = [(n, p) for n in ns for p in _signatures(n, ps)]
    for k in range(geodesics_count):
        n, p = combos[k % len(combos)]
        Q = random_glsym(n, p, rng)
        geo = geodesics.geodesic_from_tangent(Q, random_tangent(n, rng))
        for t in (0.25, 0.5, 1.0):
            img = Q @ np.linalg.solve(geodesics.geodesic_matrix_at(geo, t), Q)
            back = geodesics.geodesic_matrix_at(geo, -t)
            rev = max(rev, np.linalg.norm(img - back) / np.linalg.norm(back))
    far = 0.0
    hits = 0
    for k in range(fuzz_points):
        n = ns[k % len(ns)]
        Q = random_spd(n, rng)
        for X in _fixed_points(Q, rng, starts):
            hits += 1
            far = max(far, np.linalg.norm(X - Q) / np.linalg.norm(Q))
    passed = rev <= 1e-8 and far <= 1e-6 and hits > 0
    detail = f"reversal {rev:.3e}; {hits} fixed points found, farthest from Q {far:.3e}"
    return _result(9, "geodesic symmetry", max(rev, far), 1e-8, detail, passed)


class _Corrupted:
    # oracle wrapper that perturbs the output of one call
    def __init__(self, fn, bad_call, bump=0.1):
        self.fn = fn
        self.bad_call = bad_call
        self.bump = bump
        self.calls = 0

    def __call__(self, A):
        out = np.array(self.fn(A))
        if self.calls == self.bad_call:
            out = out + self.bump * np.eye(out.shape[0])
        self.calls += 1
        return out


def identify_call_count(n, probe_size=50):
    """Number of oracle evaluations made by :func:`isometry.identify`."""
    return 4 + (2 if n >= 3 else 0) + 2 * (n - 1) + probe_size


def check_identify(seed=0, ns=(3, 4), cases=100, corrupt_every=10):
    """Round-trip random ``(M, a, b)`` through :func:`isometry.identify`.

    Every ``corrupt_every``-th case also reruns identification with one
    perturbed oracle output, walking the perturbed call through all phases;
    each such run must raise :class:`NotAnIsometryError`.
    """
    rng = _rng(seed, 10)
    worst = 0.0
    flag_misses = 0
    accepted_bad = 0
    corrupted = 0
    for n in ns:
        total = identify_call_count(n)
        for k in range(cases):
            true = isometry.CanonicalIsometry(random_gl(n, rng), int(rng.integers(2)), int(rng.integers(2)))
            sub = int(rng.integers(2**31))
            got = isometry.identify(true, n, seed=sub)
            if (got.a, got.b) != (true.a, true.b):
                flag_misses += 1
            worst = max(worst, np.linalg.norm(got.M - true.M) / np.linalg.norm(true.M))
            if k % corrupt_every == 0:
                bad = (k // corrupt_every * 7) % total
                corrupted += 1
                try:
                    isometry.identify(_Corrupted(true, bad), n, seed=sub)
                    accepted_bad += 1
                except NotAnIsometryError:
                    pass
    passed = worst <= 1e-6 and flag_misses == 0 and accepted_bad == 0
    detail = (
        f"{cases * len(ns)} cases, flag mismatches {flag_misses}, "
        f"corrupted oracles accepted {accepted_bad}/{corrupted}"
    )
    return _result(10, "isometry identification", worst, 1e-6, detail, passed)


def check_foliation(seed=0, ns=(2, 3, 4, 5), leaves=100, ts=np.linspace(-1.0, 1.0, 9)):
    """Geodesics of the leaf ``U P_n`` keep polar factor ``U``."""
    rng = _rng(seed, 11)
    worst = 0.0
    for k in range(leaves):
        n = ns[k % len(ns)]
        U = random_orthogonal(n, rng)
        geo = geodesics.geodesic_from_tangent(random_spd(n, rng), random_tangent(n, rng))
        for t in ts:
            Uhat, _ = symcore.polar_decompose(U @ geodesics.geodesic_matrix_at(geo, t))
            worst = max(worst, np.linalg.norm(Uhat - U))
    return _result(11, "polar foliation", worst, 1e-9, f"{leaves} leaves, {len(ts)} points each")


def check_trace_inequality(seed=0, ns=(2, 3, 4, 5), samples=10_000):
    """``(tr Y)^2 <= n tr(Y^2)``, tight only near multiples of the identity.

    The gap equals ``n ||Y - (tr Y / n) I||_F^2``, so near-equality within
    ``1e-9`` bounds the deviation only by ``sqrt(1e-9 / n)``. Samples are
    uniform symmetric matrices plus exact multiples ``lambda I``.
    """
    rng = _rng(seed, 12)
    worst_viol = 0.0
    bad_equal = 0
    equal = 0
    for k in range(samples):
        n = ns[k % len(ns)]
        Y = rng.uniform(-2.0, 2.0) * np.eye(n) if k % 10 == 0 else random_sym(n, rng)
        tr = np.trace(Y)
        gap = n * np.trace(Y @ Y) - tr * tr
        worst_viol = max(worst_viol, -gap)
        if abs(gap) <= 1e-9:
            equal += 1
            if np.linalg.norm(Y - tr / n * np.eye(n)) >= 1e-6:
                bad_equal += 1
    passed = worst_viol <= 1e-9 and bad_equal == 0
    detail = f"{equal} near-equalities, {bad_equal} away from scalar matrices"
    return _result(12, "trace inequality", max(worst_viol, 0.0), 1e-9, detail, passed)


CHECKS = {
    1: check_scalar_curvature,
    2: check_einstein,
    3: check_slp2_sectional,
    4: check_spd_sectional,
    5: check_geodesic_oracle,
    6: check_riemann_oracle,
    7: check_distance,
    8: check_product,
    9: check_geodesic_symmetry,
    10: check_identify,
    11: check_foliation,
    12: check_trace_inequality,
}

SUITES = {
    "curvature": (1, 2, 3, 4, 12),
    "oracle": (5, 6),
    "geodesic": (7, 11),
    "metric": (8,),
    "isometry": (9, 10),
}
SUITES["all"] = tuple(sorted(CHECKS))

# which keyword filters each check understands
_TAKES_N = {1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12}
_TAKES_P = {1, 2, 9}


def _run_one(args):
    number, seed, n, p = args
    kwargs = {"seed": seed}
    if n is not None and number in _TAKES_N:
        kwargs["ns"] = (n,)
    if p is not None and number in _TAKES_P:
        kwargs["ps"] = (p,)
    start = time.perf_counter()
    res = CHECKS[number](**kwargs)
    return CheckResult(**{**res.__dict__, "seconds": time.perf_counter() - start})


def run_suite(name, seed=0, n=None, p=None, jobs=1):
    """Run a named suite and return results in criterion order.

    ``n`` and ``p`` restrict checks that range over orders or signatures;
    criterion 3 is always on ``SLP_2``. With ``jobs > 1`` criteria run in a
    process pool; aggregation order does not depend on completion order.
    """
    if name not in SUITES:
        raise ArgumentError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if n is not None and n < 2:
        raise ArgumentError("n must be >= 2")
    if p is not None and (p < 0 or (n is not None and p > n)):
        raise ArgumentError(f"signature p={p} is out of range")
    tasks = [(k, seed, n, p) for k in SUITES[name]]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, tasks))
    return [_run_one(t) for t in tasks]
