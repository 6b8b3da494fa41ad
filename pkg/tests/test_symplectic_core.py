import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import profile_integral
from toeplitz_trace import symplectic_core as sc
from toeplitz_trace.errors import IllConditionedError, NotVeryCleanError, PreconditionError
from toeplitz_trace.suites import partially_fixed_symplectic

seeds = st.integers(min_value=0, max_value=2**31 - 1)
dims = st.integers(min_value=1, max_value=3)


def rotation(beta):
    return np.array([[math.cos(beta), -math.sin(beta)], [math.sin(beta), math.cos(beta)]])


@pytest.mark.parametrize("d", [1, 2, 3])
def test_j0_is_complex_structure(d):
    J = sc.J0(d)
    np.testing.assert_array_equal(J @ J, -np.eye(2 * d))
    np.testing.assert_array_equal(J.T, -J)


def test_omega0_sign():
    assert sc.omega0([1.0, 0.0], [0.0, 1.0]) == 1.0
    assert sc.omega0([0.0, 1.0], [1.0, 0.0]) == -1.0


def test_omega0_batched():
    rng = np.random.default_rng(0)
    v, w = rng.normal(size=(2, 5, 4))
    expected = [-a @ sc.J0(2) @ b for a, b in zip(v, w)]
    np.testing.assert_allclose(sc.omega0(v, w), expected, atol=1e-14)


@given(d=dims, seed=seeds, spread=st.floats(0.0, 1.5))
def test_random_symplectic_is_symplectic(d, seed, spread):
    A = sc.random_symplectic(d, spread, seed)
    sc.check_symplectic(A)


@given(d=dims, seed=seeds)
def test_random_unitary_is_orthogonal_and_symplectic(d, seed):
    A = sc.random_unitary_symplectic(d, seed)
    np.testing.assert_allclose(A.T @ A, np.eye(2 * d), atol=1e-12)
    assert sc.symplectic_defect(A) < 1e-12


def test_check_symplectic_rejects():
    with pytest.raises(PreconditionError):
        sc.check_symplectic(np.diag([2.0, 2.0]))
    with pytest.raises(PreconditionError):
        sc.check_symplectic(np.eye(3))


@given(d=dims, seed=seeds)
def test_polar_factors(d, seed):
    A = sc.random_symplectic(d, 1.0, seed)
    pf = sc.polar_decompose(A)
    np.testing.assert_allclose(pf.orthogonal @ pf.symmetric, A, atol=1e-10 * np.linalg.norm(A) ** 2)
    np.testing.assert_allclose(pf.orthogonal.T @ pf.orthogonal, np.eye(2 * d), atol=1e-10)
    assert np.linalg.eigvalsh(pf.symmetric).min() > 0
    assert sc.symplectic_defect(pf.orthogonal) < 1e-9
    assert sc.symplectic_defect(pf.symmetric) < 1e-9 * (1 + np.linalg.norm(A, 2) ** 2)


def test_polar_rejects_singular():
    with pytest.raises(IllConditionedError):
        sc.polar_decompose(np.array([[1.0, 0.0], [0.0, 0.0]]))


@given(d=dims, seed=seeds, spread=st.floats(0.05, 1.2))
def test_two_constructions_agree(d, seed, spread):
    A = sc.random_symplectic(d, spread, seed)
    dev = np.max(np.abs(sc.profile_matrix(A) - sc.profile_matrix_alt(A)))
    assert dev <= 1e-9 * (1 + np.linalg.norm(A, 2) ** 2)


@given(d=dims, seed=seeds)
def test_profile_matrix_is_symmetric(d, seed):
    M = sc.profile_matrix(sc.random_symplectic(d, 1.0, seed))
    np.testing.assert_allclose(M, M.T, atol=1e-12)


@pytest.mark.parametrize("beta", [0.3, math.pi / 2, 2.0, math.pi])
def test_rotation_profile_closed_form(beta):
    # hand computation: psi2(R n, n) at n = e_x
    expected = -(1 - math.cos(beta)) + 1j * math.sin(beta)
    assert abs(sc.psi2_A(rotation(beta), [1.0, 0.0]) - expected) < 1e-12


@pytest.mark.parametrize("n", [[1.0, 0.0], [0.3, -0.8], [2.0, 1.0]])
def test_minus_identity_profile(n):
    n = np.asarray(n)
    assert abs(sc.psi2_A(-np.eye(2), n) - (-2.0 * n @ n)) < 1e-12


def test_profile_against_frozen_quadrature():
    # trapezoid value of int exp(psi2(n, v) + psi2(A v, n)) dv, frozen
    A = np.diag([2.0, 0.5])
    n = np.array([0.7, -0.3])
    frozen = 2.167322356046826 + 0.5580278809923518j
    assert abs(profile_integral(A, n) - frozen) < 1e-12
    value = 2 * math.pi / math.sqrt(np.linalg.det(sc.q_of(A))) * np.exp(sc.psi2_A(A, n))
    assert abs(value / frozen - 1) < 1e-10


@given(seed=seeds, n=st.tuples(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5)))
def test_profile_against_composition_integral(seed, n):
    A = sc.random_symplectic(1, 0.6, seed)
    n = np.asarray(n)
    value = 2 * math.pi / math.sqrt(np.linalg.det(sc.q_of(A))) * np.exp(sc.psi2_A(A, n))
    oracle = profile_integral(A, n, L=12.0, N=481)
    assert abs(value - oracle) <= 1e-8 * max(1.0, abs(oracle))


@given(d=dims, seed=seeds)
def test_unitary_reduces_to_psi2(d, seed):
    A = sc.random_unitary_symplectic(d, seed)
    v = np.random.default_rng(seed).normal(size=(20, 2 * d))
    np.testing.assert_allclose(sc.psi2_A(A, v), sc.psi2(v @ A.T, v), atol=1e-10)


@given(d=dims, seed=seeds)
def test_f_identity(d, seed):
    A = sc.random_symplectic(d, 1.0, seed)
    other = -A.T @ sc.J0(d) @ (A - np.eye(2 * d))
    np.testing.assert_allclose(sc.f_of(A), other, atol=1e-10 * (1 + np.linalg.norm(A, 2) ** 2))


def test_psi2_on_diagonal_is_zero():
    v = np.random.default_rng(1).normal(size=(10, 4))
    np.testing.assert_allclose(sc.psi2(v, v), 0.0)


@pytest.mark.parametrize(
    "A, ker, im, inter, very_clean",
    [
        (np.eye(2), 2, 0, 0, True),
        (-np.eye(2), 0, 2, 0, True),
        (np.array([[1.0, 1.0], [0.0, 1.0]]), 1, 1, 1, False),
        (rotation(1.0), 0, 2, 0, True),
    ],
)
def test_cleanliness(A, ker, im, inter, very_clean):
    rep = sc.cleanliness(A)
    assert (rep.ker_dim, rep.im_dim, rep.intersection_dim, rep.very_clean) == (ker, im, inter, very_clean)


def test_negdef_preconditions():
    with pytest.raises(NotVeryCleanError):
        sc.negdef_on_image(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(PreconditionError):
        sc.negdef_on_image(np.eye(2))


@pytest.mark.parametrize("A, top", [(-np.eye(2), -2.0), (rotation(math.pi / 2), -1.0)])
def test_negdef_values(A, top):
    assert abs(sc.negdef_on_image(A) - top) < 1e-12


@given(d=st.integers(2, 3), seed=seeds)
def test_negdef_with_fixed_block(d, seed):
    A = partially_fixed_symplectic(d, 1, 1.0, seed)
    rep = sc.cleanliness(A)
    if not rep.very_clean or rep.im_dim == 0:
        return
    assert rep.ker_dim == 2
    assert sc.negdef_on_image(A) < 0


@given(d=dims, seed=seeds)
def test_negdef_generic(d, seed):
    assert sc.negdef_on_image(sc.random_symplectic(d, 1.0, seed)) < 0
