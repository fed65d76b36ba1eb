"""Dense linear-algebra kernel tests against numpy and first-principles
oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advectbench import linalg
from advectbench.errors import SingularSystemError, UsageError


def rng(seed=0):
    return np.random.default_rng(seed)


# ---------------------------------------------------------------- matmul


def test_matmul_identity():
    x = rng().uniform(-1, 1, (3, 5))
    assert np.array_equal(linalg.matmul(np.eye(3), x), x)


def test_matmul_column_swap():
    out = linalg.matmul(np.array([[1.0, 2.0], [3.0, 4.0]]),
                        np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.array_equal(out, [[2.0, 1.0], [4.0, 3.0]])


def test_matmul_triple_loop_oracle():
    a = rng(1).uniform(-1, 1, (5, 4))
    b = rng(2).uniform(-1, 1, (4, 3))
    want = np.zeros((5, 3))
    for i in range(5):
        for j in range(3):
            for k in range(4):
                want[i, j] += a[i, k] * b[k, j]
    assert np.allclose(linalg.matmul(a, b), want, rtol=0, atol=1e-14)


def test_matmul_dimension_mismatch():
    with pytest.raises(UsageError):
        linalg.matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_nonfinite_input_rejected():
    with pytest.raises(UsageError):
        linalg.as_matrix(np.array([[1.0, np.nan]]), "a")
    with pytest.raises(UsageError):
        linalg.as_matrix(np.array([[np.inf]]), "a")


# ---------------------------------------------------------- frobenius_norm


def test_frobenius_zero_and_345():
    assert linalg.frobenius_norm(np.zeros((3, 3))) == 0.0
    assert linalg.frobenius_norm(np.array([[3.0, 4.0]])) == 5.0


def test_frobenius_extended_precision_oracle():
    a = rng(3).uniform(-1, 1, (6, 6))
    want = math.sqrt(math.fsum(float(v) ** 2 for v in a.ravel()))
    assert abs(linalg.frobenius_norm(a) - want) <= 1e-14 * want


# ------------------------------------------------------------- hessenberg


def test_hessenberg_2x2_is_noop():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    q, h = linalg.hessenberg(a)
    assert np.array_equal(q, np.eye(2))
    assert np.array_equal(h, a)


def test_hessenberg_upper_triangular_input():
    a = np.triu(rng(4).uniform(-1, 1, (6, 6)))
    q, h = linalg.hessenberg(a)
    assert np.all(np.abs(np.tril(h, -2)) == 0.0)
    assert np.linalg.norm(q @ h @ q.T - a) <= 1e-12 * max(1.0, np.linalg.norm(a))


def test_hessenberg_random_residuals():
    a = rng(5).uniform(-1, 1, (10, 10))
    q, h = linalg.hessenberg(a)
    scale = max(1.0, np.linalg.norm(a))
    assert np.all(np.abs(np.tril(h, -2)) == 0.0)
    assert np.linalg.norm(q @ h @ q.T - a) <= 1e-12 * scale
    assert np.linalg.norm(q.T @ q - np.eye(10)) <= 1e-12 * math.sqrt(10)


# --------------------------------------------------------- schur_decompose


def _assert_quasi_triangular(t):
    n = t.shape[0]
    assert np.all(np.abs(np.tril(t, -2)) == 0.0)
    for i in range(n - 1):
        if t[i + 1, i] != 0.0:
            if i > 0:
                assert t[i, i - 1] == 0.0
            if i + 2 < n:
                assert t[i + 2, i + 1] == 0.0


def test_schur_diagonal_input():
    f = linalg.schur_decompose(np.diag([1.0, 2.0, 3.0]))
    assert sorted(z.real for z in f.eigenvalues) == [1.0, 2.0, 3.0]
    assert all(z.imag == 0.0 for z in f.eigenvalues)


def test_schur_rotation_block():
    f = linalg.schur_decompose(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    got = sorted(f.eigenvalues, key=lambda z: z.imag)
    assert abs(got[0] - (-1j)) <= 1e-14
    assert abs(got[1] - 1j) <= 1e-14
    assert f.t[1, 0] != 0.0  # one genuine 2x2 block


def test_schur_random_20x20_vs_numpy_eigvals():
    a = rng(6).uniform(-1, 1, (20, 20))
    f = linalg.schur_decompose(a)
    _assert_quasi_triangular(f.t)
    scale = max(1.0, np.linalg.norm(a))
    assert np.linalg.norm(f.q @ f.t @ f.q.T - a) <= 1e-11 * scale
    got = sorted(f.eigenvalues, key=lambda z: (z.real, z.imag))
    want = sorted(np.linalg.eigvals(a), key=lambda z: (z.real, z.imag))
    assert max(abs(g - w) for g, w in zip(got, want)) <= 1e-8


def test_schur_nonconvergence_reports_iterations():
    with pytest.raises(Exception) as info:
        linalg.schur_decompose(rng(7).uniform(-1, 1, (12, 12)), max_sweeps=1)
    assert getattr(info.value, "iterations", None) == 1


# ------------------------------------------------------------- eigenvalues


def test_eigenvalues_identity():
    assert linalg.eigenvalues(np.eye(4)) == [1.0, 1.0, 1.0, 1.0]


def test_eigenvalues_nilpotent_lower_bidiagonal():
    a = np.diag([2.0, 3.0, 4.0], -1)
    assert all(z == 0.0 for z in linalg.eigenvalues(a))


def test_eigenvalues_tridiagonal_toeplitz_closed_form():
    m = 9
    delta, eps = -0.3, -1.7
    a = np.diag(np.full(m - 1, delta), 1) + np.diag(np.full(m - 1, eps), -1)
    want = sorted(2.0 * math.sqrt(delta * eps) * math.cos(k * math.pi / (m + 1))
                  for k in range(1, m + 1))
    got = sorted(z.real for z in linalg.eigenvalues(a))
    assert max(abs(g - w) for g, w in zip(got, want)) <= 1e-10


def test_eigenvalue_trace_and_determinant_identities():
    for seed in range(10):
        n = int(rng(seed).integers(2, 13))
        a = rng(100 + seed).uniform(-1, 1, (n, n))
        eig = linalg.eigenvalues(a)
        tr = sum(eig)
        assert abs(tr.imag) <= 1e-9
        assert abs(tr.real - np.trace(a)) <= 1e-9 * (1.0 + abs(np.trace(a)))
        prod = complex(1.0)
        for z in eig:
            prod *= z
        det = np.linalg.det(a)
        assert abs(prod - det) <= 1e-7 * max(abs(det), 1e-30)


# -------------------------------------------------------------- gauss_solve


def test_gauss_solve_identity_and_diagonal():
    b = rng(8).uniform(-1, 1, 5)
    assert np.allclose(linalg.gauss_solve(np.eye(5), b), b, atol=0)
    x = linalg.gauss_solve(np.array([[2.0, 0.0], [0.0, 4.0]]),
                           np.array([2.0, 8.0]))
    assert np.allclose(x, [1.0, 2.0], atol=1e-15)


def test_gauss_solve_residual():
    a = rng(9).uniform(-1, 1, (12, 12)) + 3.0 * np.eye(12)
    b = rng(10).uniform(-1, 1, 12)
    x = linalg.gauss_solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-10 * max(1.0, np.linalg.norm(b))


def test_gauss_solve_singular():
    with pytest.raises(SingularSystemError):
        linalg.gauss_solve(np.ones((3, 3)), np.ones(3))


# ------------------------------------------------------------ tridiag_solve


def test_tridiag_identity_diagonal():
    x = linalg.tridiag_solve(np.zeros(2), np.ones(3), np.zeros(2),
                             np.array([4.0, 5.0, 6.0]))
    assert np.array_equal(x, [4.0, 5.0, 6.0])


def test_tridiag_symmetric_2x2():
    x = linalg.tridiag_solve(np.array([1.0]), np.array([2.0, 2.0]),
                             np.array([1.0]), np.array([3.0, 3.0]))
    assert np.allclose(x, [1.0, 1.0], atol=1e-15)


def test_tridiag_matches_dense_solve():
    n = 10
    sub = rng(11).uniform(-1, 1, n - 1)
    dia = rng(12).uniform(-1, 1, n) + 4.0
    sup = rng(13).uniform(-1, 1, n - 1)
    b = rng(14).uniform(-1, 1, n)
    a = np.diag(dia) + np.diag(sub, -1) + np.diag(sup, 1)
    x = linalg.tridiag_solve(sub, dia, sup, b)
    assert np.allclose(x, linalg.gauss_solve(a, b), rtol=1e-12, atol=1e-12)


def test_tridiag_zero_pivot():
    with pytest.raises(SingularSystemError):
        linalg.tridiag_solve(np.array([0.0]), np.array([0.0, 1.0]),
                             np.array([0.0]), np.array([1.0, 1.0]))


# ---------------------------------------------------------- min_norm_lstsq


def test_min_norm_unreachable_row():
    x = linalg.min_norm_lstsq(np.array([[1.0, 0.0], [0.0, 0.0]]),
                              np.array([1.0, 1.0]))
    assert np.allclose(x, [1.0, 0.0], atol=1e-14)


def test_min_norm_point_on_line():
    x = linalg.min_norm_lstsq(np.array([[1.0, 1.0]]), np.array([2.0]))
    assert np.allclose(x, [1.0, 1.0], atol=1e-14)


def test_min_norm_kkt_and_null_orthogonality():
    g = rng(15)
    a = g.uniform(-1, 1, (8, 3)) @ g.uniform(-1, 1, (3, 6))  # rank 3
    b = g.uniform(-1, 1, 8)
    fac = linalg.cod_factor(a)
    assert fac.rank == 3
    x = fac.solve_min_norm(b)
    scale = max(1.0, np.linalg.norm(a) * np.linalg.norm(b))
    assert np.linalg.norm(a.T @ (a @ x - b)) <= 1e-10 * scale
    z = fac.null_space()
    assert z.shape == (6, 3)
    assert np.linalg.norm(a @ z) <= 1e-10 * max(1.0, np.linalg.norm(a))
    for k in range(50):
        v = z @ rng(200 + k).uniform(-1, 1, 3)
        assert abs(x @ v) <= 1e-10 * max(1.0, np.linalg.norm(v))


def test_min_norm_matches_numpy_lstsq():
    g = rng(16)
    a = g.uniform(-1, 1, (9, 4)) @ g.uniform(-1, 1, (4, 7))
    b = g.uniform(-1, 1, 9)
    want = np.linalg.lstsq(a, b, rcond=None)[0]
    assert np.allclose(linalg.min_norm_lstsq(a, b), want, rtol=1e-9, atol=1e-12)


def test_min_norm_zero_matrix():
    x = linalg.min_norm_lstsq(np.zeros((3, 4)), np.ones(3))
    assert np.array_equal(x, np.zeros(4))
    assert linalg.cod_factor(np.zeros((3, 4))).rank == 0


def test_min_norm_agrees_with_gauss_on_full_rank():
    a = rng(17).uniform(-1, 1, (7, 7)) + 3.0 * np.eye(7)
    b = rng(18).uniform(-1, 1, 7)
    x1 = linalg.min_norm_lstsq(a, b)
    x2 = linalg.gauss_solve(a, b)
    assert np.linalg.norm(x1 - x2) <= 1e-9 * max(1.0, np.linalg.norm(x2))


# -------------------------------------------------------- kron_vec_operator


def test_kron_scalar_and_identity_cases():
    assert np.array_equal(linalg.kron_vec_operator(np.array([[2.0]]),
                                                   np.array([[3.0]])),
                          [[5.0]])
    assert np.array_equal(linalg.kron_vec_operator(np.eye(2), np.zeros((2, 2))),
                          np.eye(4))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10_000))
def test_kron_action_equality(m, n, seed):
    g = rng(seed)
    a = g.uniform(-1, 1, (m, m))
    b = g.uniform(-1, 1, (n, n))
    x = g.uniform(-1, 1, (m, n))
    k = linalg.kron_vec_operator(a, b)
    lhs = k @ linalg.vec(x)
    rhs = linalg.vec(a @ x + x @ b)
    assert np.linalg.norm(lhs - rhs) <= 1e-13 * max(1.0, np.linalg.norm(rhs))


def test_kron_size_guard():
    with pytest.raises(UsageError):
        linalg.kron_vec_operator(np.eye(200), np.eye(200))


def test_vec_unvec_roundtrip_column_stacking():
    x = np.array([[1.0, 3.0], [2.0, 4.0]])
    assert np.array_equal(linalg.vec(x), [1.0, 2.0, 3.0, 4.0])
    assert np.array_equal(linalg.unvec(linalg.vec(x), 2, 2), x)


# ------------------------------------------------- smallest_singular_value


def test_smallest_singular_value_vs_numpy():
    a = rng(19).uniform(-1, 1, (9, 9))
    want = np.linalg.svd(a, compute_uv=False)[-1]
    assert abs(linalg.smallest_singular_value(a) - want) <= 1e-8 * max(1.0, want)


def test_smallest_singular_value_singular_matrix():
    a = np.ones((4, 4))
    assert linalg.smallest_singular_value(a) == 0.0
