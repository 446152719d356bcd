import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from strategies import glsym, seeds, spd
from tracemetric import symcore
from tracemetric.exceptions import ArgumentError, DomainError, IterationError
from tracemetric.sampling import random_gl, random_glsym, random_spd, random_sym


# eig_sym

def test_eig_identity():
    Q, lam = symcore.eig_sym(np.eye(2))
    np.testing.assert_array_equal(lam, [1.0, 1.0])
    np.testing.assert_array_equal(Q, np.eye(2))


def test_eig_diagonal():
    Q, lam = symcore.eig_sym(np.diag([4.0, 9.0]))
    np.testing.assert_array_equal(lam, [4.0, 9.0])
    np.testing.assert_array_equal(Q, np.eye(2))


def test_eig_two_by_two():
    Q, lam = symcore.eig_sym([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(lam, [1.0, 3.0], atol=1e-15)
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(Q[:, 0], [r, -r], atol=1e-15)
    np.testing.assert_allclose(Q[:, 1], [r, r], atol=1e-15)


def test_eig_random_sweep():
    rng = np.random.default_rng(0)
    for k in range(1000):
        n = 2 + k % 5
        A = random_sym(n, rng)
        Q, lam = symcore.eig_sym(A)
        assert np.linalg.norm((Q * lam) @ Q.T - A) < 1e-10 * np.linalg.norm(A)
        assert np.linalg.norm(Q.T @ Q - np.eye(n)) < 1e-12
        assert np.all(np.diff(lam) >= 0)


def test_eig_matches_lapack_spectrum(rng):
    A = random_sym(6, rng)
    _, lam = symcore.eig_sym(A)
    np.testing.assert_allclose(lam, np.linalg.eigvalsh(A), atol=1e-12)


def test_eig_iteration_failure():
    with pytest.raises(IterationError):
        symcore.eig_sym([[2.0, 1.0], [1.0, 2.0]], max_sweeps=0)


def test_eig_rejects_nonsymmetric():
    with pytest.raises(ArgumentError):
        symcore.eig_sym([[1.0, 2.0], [0.0, 1.0]])


# expm

def test_expm_zero_is_exact_identity():
    np.testing.assert_array_equal(symcore.expm(np.zeros((3, 3))), np.eye(3))


def test_expm_diagonal():
    np.testing.assert_allclose(symcore.expm(np.diag([0.3, -1.7])), np.diag(np.exp([0.3, -1.7])), rtol=1e-14)


@pytest.mark.parametrize("t", [0.1, 1.0, 2.5, 10.0])
def test_expm_rotation(t):
    R = symcore.expm([[0.0, t], [-t, 0.0]])
    c, s = np.cos(t), np.sin(t)
    np.testing.assert_allclose(R, [[c, s], [-s, c]], atol=1e-13)


@given(seeds, st.integers(2, 6), st.floats(0.01, 4.0))
def test_expm_against_scipy(seed, n, scale):
    C = np.random.default_rng(seed).standard_normal((n, n)) * scale / n
    ref = scipy.linalg.expm(C)
    assert np.linalg.norm(symcore.expm(C) - ref) <= 1e-12 * np.linalg.norm(ref)


# principal log and powers

def test_log_identity():
    np.testing.assert_array_equal(symcore.log_principal(np.eye(3)), np.zeros((3, 3)))


def test_log_diagonal():
    np.testing.assert_allclose(symcore.log_principal(np.diag([np.e, np.e**2])), np.diag([1.0, 2.0]), atol=1e-15)


def test_log_nonsymmetric_with_witness():
    G = np.array([[1.0, 1.0], [0.0, 1.0]])
    Gi = np.linalg.inv(G)
    M = Gi @ np.diag([2.0, 3.0]) @ G
    # G^T G makes W M = G^T diag(2,3) G symmetric
    L = symcore.log_principal(M, witness=G.T @ G)
    np.testing.assert_allclose(L, Gi @ np.diag(np.log([2.0, 3.0])) @ G, atol=1e-12)


def test_log_pair_route(rng):
    A, B = random_spd(4, rng), random_spd(4, rng)
    L = symcore.log_principal(pair=(A, B))
    M = np.linalg.solve(A, B)
    np.testing.assert_allclose(symcore.expm(L), M, rtol=0, atol=1e-9 * np.linalg.norm(M))
    np.testing.assert_allclose(L, symcore.log_principal(M, witness=A), atol=1e-10)


def test_log_rejects_nonsymmetric_without_witness():
    with pytest.raises(DomainError):
        symcore.log_principal(np.array([[1.0, 1.0], [0.0, 2.0]]))


def test_log_rejects_nonpositive_spectrum():
    with pytest.raises(DomainError):
        symcore.log_principal(np.diag([1.0, -2.0]))


def test_log_rejects_bad_witness():
    M = np.array([[1.0, 1.0], [0.0, 2.0]])
    with pytest.raises(DomainError):
        symcore.log_principal(M, witness=np.eye(2))


@given(spd())
def test_expm_log_roundtrip(A):
    back = symcore.expm(symcore.log_principal(A))
    assert np.linalg.norm(back - A) < 1e-9 * np.linalg.norm(A)


def test_power_zero_is_identity(rng):
    A = random_spd(3, rng)
    np.testing.assert_allclose(symcore.power_frac(A, 0.0), np.eye(3), atol=0)


def test_power_half_diagonal():
    np.testing.assert_allclose(symcore.power_frac(np.diag([4.0, 9.0]), 0.5), np.diag([2.0, 3.0]), atol=1e-14)


def test_power_one_roundtrip(rng):
    A, B = random_spd(3, rng), random_spd(3, rng)
    M = np.linalg.solve(A, B)
    np.testing.assert_allclose(symcore.power_frac(r=1.0, pair=(A, B)), M, atol=1e-9 * np.linalg.norm(M))


# square root and polar

def test_sqrt_examples():
    np.testing.assert_array_equal(symcore.sqrt_spd(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(symcore.sqrt_spd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-15)
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    Q, _ = symcore.eig_sym(A)
    R = symcore.sqrt_spd(A)
    np.testing.assert_allclose(R, (Q * [1.0, np.sqrt(3.0)]) @ Q.T, atol=1e-14)
    np.testing.assert_allclose(R @ R, A, atol=1e-10)


def test_sqrt_rejects_indefinite():
    with pytest.raises(DomainError):
        symcore.sqrt_spd(np.diag([1.0, -1.0]))


@given(spd())
def test_sqrt_squares_back(A):
    R = symcore.sqrt_spd(A)
    assert np.all(np.linalg.eigvalsh(R) > 0)
    assert np.linalg.norm(R @ R - A) < 1e-10 * np.linalg.norm(A)


def test_polar_orthogonal_input(rng):
    U0, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    U, Q = symcore.polar_decompose(U0)
    np.testing.assert_allclose(U, U0, atol=1e-12)
    np.testing.assert_allclose(Q, np.eye(4), atol=1e-12)


def test_polar_spd_input(rng):
    Q0 = random_spd(4, rng)
    U, Q = symcore.polar_decompose(Q0)
    np.testing.assert_allclose(U, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(Q, Q0, atol=1e-12)


@given(seeds, st.integers(2, 6))
def test_polar_random(seed, n):
    A = random_gl(n, np.random.default_rng(seed), spread=1.0)
    U, Q = symcore.polar_decompose(A)
    assert np.linalg.norm(U @ Q - A) < 1e-10 * np.linalg.norm(A)
    assert np.linalg.norm(U.T @ U - np.eye(n)) < 1e-12
    assert np.all(np.linalg.eigvalsh(Q) > 0)


def test_polar_deterministic(rng):
    A = rng.standard_normal((5, 5))
    U1, Q1 = symcore.polar_decompose(A)
    U2, Q2 = symcore.polar_decompose(A.copy())
    assert np.array_equal(U1, U2) and np.array_equal(Q1, Q2)


def test_polar_rejects_singular():
    with pytest.raises(DomainError):
        symcore.polar_decompose([[1.0, 2.0], [2.0, 4.0]])


# signature and congruence normalization

@pytest.mark.parametrize("n", [2, 3, 5])
def test_signature_identity(n):
    assert symcore.signature_of(np.eye(n)) == (n, 0)


@pytest.mark.parametrize("n,p", [(2, 0), (2, 1), (3, 2), (4, 1), (5, 3)])
def test_signature_canonical(n, p):
    assert symcore.signature_of(symcore.canonical_form(n, p)) == (p, n - p)


def test_signature_mixed_diagonal():
    assert symcore.signature_of(np.diag([2.0, -3.0])) == (1, 1)


def test_signature_near_singular():
    with pytest.raises(DomainError):
        symcore.signature_of(np.diag([1.0, 1e-14]))


@given(glsym(), seeds)
def test_sylvester_law(A, seed):
    n = A.shape[0]
    C = random_gl(n, np.random.default_rng(seed))
    assert symcore.signature_of(C @ A @ C.T) == symcore.signature_of(A)


def test_congruence_of_canonical_form():
    J = symcore.canonical_form(3, 2)
    C, p = symcore.congruence_to_canonical(J)
    assert p == 2
    np.testing.assert_allclose(C @ J @ C.T, J, atol=1e-15)


def test_congruence_diagonal_example():
    C, p = symcore.congruence_to_canonical(np.diag([4.0, -9.0]))
    assert p == 1
    np.testing.assert_allclose(C, np.diag([0.5, 1.0 / 3.0]), atol=1e-15)


def test_congruence_random(rng):
    A = random_glsym(3, 2, rng)
    C, p = symcore.congruence_to_canonical(A)
    assert p == 2
    assert np.linalg.norm(C @ A @ C.T - symcore.canonical_form(3, 2)) < 1e-10


def test_as_symmetric_checks():
    with pytest.raises(ArgumentError):
        symcore.as_symmetric([[1.0, 0.1], [0.0, 1.0]])
    with pytest.raises(ArgumentError):
        symcore.as_symmetric(np.ones((2, 3)))
    S = symcore.as_symmetric([[1.0, 2.0 + 1e-15], [2.0, 1.0]])
    assert np.array_equal(S, S.T)
