import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wishart_eigs.eigensolve import (
    CharPolyEval,
    charpoly_pencil,
    charpoly_tridiag,
    dense_hermitian_eigen,
    pencil_eigen_all,
    pencil_root_levels,
    sturm_count,
    tridiag_eigen_all,
    tridiag_eigen_extreme,
)
from wishart_eigs.ensembles import (
    BidiagonalFactor,
    BidiagonalPencil,
    DenseHermitian,
    EnsembleParams,
    SymTridiagonal,
    build_bidiagonal,
    build_pencil,
    to_tridiagonal,
)
from wishart_eigs.errors import InvalidParameterError, SolverError
from wishart_eigs.randstream import RngStream

T22 = SymTridiagonal(np.array([4.0, 10.0]), np.array([6.0]))
ROOTS22 = (7 + 3 * math.sqrt(5), 7 - 3 * math.sqrt(5))


def random_gram_tridiagonal(seed, n):
    rng = np.random.default_rng(seed)
    B = BidiagonalFactor(rng.uniform(0.2, 3.0, n), rng.uniform(0.2, 3.0, n - 1))
    return to_tridiagonal(B)


def random_pencil(seed, n):
    rng = np.random.default_rng(seed)
    return BidiagonalPencil(rng.uniform(0.1, 5.0, n), rng.uniform(0.1, 5.0, n - 1))


def test_two_by_two_closed_form():
    s = tridiag_eigen_all(T22)
    assert np.allclose(s.values, ROOTS22, rtol=1e-13)
    assert s.largest > s.smallest


def test_diagonal_matrix():
    T = SymTridiagonal(np.array([3.0, 1.0, 2.0]), np.zeros(2))
    assert np.array_equal(tridiag_eigen_all(T).values, [3.0, 2.0, 1.0])
    assert tridiag_eigen_extreme(T, "smallest") == pytest.approx(1.0, abs=1e-11)
    assert tridiag_eigen_extreme(T, "largest") == pytest.approx(3.0, abs=1e-11)


def test_extreme_on_two_by_two():
    norm = 16.0
    assert abs(tridiag_eigen_extreme(T22, "smallest") - ROOTS22[1]) <= 1e-12 * norm
    assert abs(tridiag_eigen_extreme(T22, "largest") - ROOTS22[0]) <= 1e-12 * norm


def test_extreme_bad_which():
    with pytest.raises(InvalidParameterError):
        tridiag_eigen_extreme(T22, "middle")


def test_bad_tol():
    with pytest.raises(InvalidParameterError):
        tridiag_eigen_all(T22, tol=1e-3)


def test_tql_matches_lapack_n12():
    T = random_gram_tridiagonal(1, 12)
    ref = np.sort(np.linalg.eigvalsh(T.matrix()))[::-1]
    assert np.allclose(tridiag_eigen_all(T).values, ref, rtol=1e-10, atol=1e-10 * ref[0])


def test_extreme_matches_full_spectrum():
    for seed in range(100):
        params = EnsembleParams(30, 30.0)
        T = to_tridiagonal(build_bidiagonal(params, RngStream(seed)))
        full = tridiag_eigen_all(T).values
        norm = np.abs(T.matrix()).sum(axis=1).max()
        assert abs(tridiag_eigen_extreme(T, "largest") - full[0]) < 1e-10 * norm
        assert abs(tridiag_eigen_extreme(T, "smallest") - full[-1]) < 1e-10 * norm


def test_negative_spectrum_rejected():
    T = SymTridiagonal(np.array([-1.0, 2.0]), np.array([0.5]))
    with pytest.raises(SolverError):
        tridiag_eigen_all(T)


def test_sturm_examples():
    assert sturm_count(T22, -100.0) == 0
    assert sturm_count(T22, 100.0) == 2
    assert sturm_count(T22, 7.0) == 1


def test_sturm_consistency_random():
    for seed in range(20):
        T = random_gram_tridiagonal(seed, 15)
        values = np.sort(tridiag_eigen_all(T).values)
        gaps = np.concatenate([[values[0] - 1.0], 0.5 * (values[1:] + values[:-1]), [values[-1] + 1.0]])
        counts = [sturm_count(T, x) for x in gaps]
        assert counts == list(range(16))


def test_charpoly_examples():
    T1 = SymTridiagonal(np.array([2.5]), np.zeros(0))
    assert charpoly_tridiag(T1, 4.0).value == pytest.approx(1.5)
    assert charpoly_tridiag(T22, 0.0).value == pytest.approx(4.0)


def test_charpoly_factorisation_and_sign():
    rng = np.random.default_rng(3)
    for seed in range(100):
        n = int(rng.integers(1, 21))
        T = random_gram_tridiagonal(seed, n) if n > 1 else SymTridiagonal(np.array([1.3]), np.zeros(0))
        lam = np.linalg.eigvalsh(T.matrix())
        for x in rng.uniform(lam.min() - 1, lam.max() + 1, 5):
            exact = np.prod(x - lam)
            got = charpoly_tridiag(T, x)
            assert abs(got.value - exact) <= 1e-8 * np.prod(np.abs(x - lam))
            assert got.sign == (-1) ** (n - sturm_count(T, x))


def test_charpoly_survives_large_n():
    params = EnsembleParams(1500, 1500.0)
    T = to_tridiagonal(build_bidiagonal(params, RngStream(0)))
    ev = charpoly_tridiag(T, 1e4)
    assert math.isinf(ev.value) or abs(ev.value) > 1e300
    lam = tridiag_eigen_all(T).values
    assert ev.log_abs == pytest.approx(np.sum(np.log(1e4 - lam)), rel=1e-9)


def test_charpoly_eval_properties():
    assert CharPolyEval(0.5, 3).value == 4.0
    assert CharPolyEval(-0.5, 3).sign == -1
    assert CharPolyEval(0.0, 0).log_abs == -math.inf


def cofactor_det(A):
    n = A.shape[0]
    if n == 1:
        return A[0, 0]
    return sum((-1) ** k * A[0, k] * cofactor_det(np.delete(A[1:], k, axis=1)) for k in range(n) if A[0, k] != 0)


def test_pencil_charpoly_low_degrees():
    P = BidiagonalPencil(np.array([1.0, 2.0, 3.0]), np.array([0.5, 0.25]))
    assert charpoly_pencil(P, 4.0, 0).value == 1.0
    assert charpoly_pencil(P, 4.0, 1).value == pytest.approx(3.0)
    # det(x M_2 - L_2) carries the factor x on the coupling term
    assert charpoly_pencil(P, 4.0, 2).value == pytest.approx((4 - 2) * (4 - 1) - 4 * 0.5)


def test_pencil_charpoly_matches_determinant():
    for seed in range(30):
        n = 1 + seed % 6
        P = random_pencil(seed, n)
        L, M = P.matrices()
        x = 0.3 + seed
        for j in range(1, n + 1):
            exact = cofactor_det(x * M[:j, :j] - L[:j, :j])
            assert charpoly_pencil(P, x, j).value == pytest.approx(exact, rel=1e-10, abs=1e-300)


def test_pencil_bad_degree():
    with pytest.raises(InvalidParameterError):
        charpoly_pencil(random_pencil(0, 3), 1.0, 4)


def test_pencil_small_cases():
    P1 = BidiagonalPencil(np.array([2.5]), np.zeros(0))
    assert pencil_eigen_all(P1).values == pytest.approx([2.5])
    at, bt = np.array([1.5, 2.0]), np.array([0.7])
    # roots of x^2 - (a1 + a2 + b1) x + a1 a2
    s = at.sum() + bt[0]
    disc = math.sqrt(s * s - 4 * at[0] * at[1])
    got = pencil_eigen_all(BidiagonalPencil(at, bt)).values
    assert np.allclose(got, [(s + disc) / 2, (s - disc) / 2], rtol=1e-12)


def test_pencil_matches_generalised_eigenproblem():
    for seed in range(20):
        P = random_pencil(seed, 8)
        L, M = P.matrices()
        ref = np.sort(np.linalg.eigvals(np.linalg.solve(M, L)).real)[::-1]
        assert np.allclose(pencil_eigen_all(P).values, ref, rtol=1e-8)


def test_pencil_interlacing_and_trace():
    # roots resolved to full precision; at the default tolerance two nearly
    # coincident roots on adjacent levels can swap within the bisection width
    rng = np.random.default_rng(5)
    for i in range(100):
        n = int(rng.integers(2, 11))
        params = EnsembleParams(n, n + rng.uniform(0.0, 10.0), 2.0)
        P = build_pencil(params, RngStream(11, i))
        levels = pencil_root_levels(P, tol=1e-16)
        for lower, upper in zip(levels[:-1], levels[1:]):
            assert np.all(upper[:-1] < lower) and np.all(lower < upper[1:])
        total = P.a_tilde.sum() + P.b_tilde.sum()
        assert abs(levels[-1].sum() - total) <= 1e-8 * total


def test_pencil_weak_interlacing_default_tol():
    for seed in range(100):
        levels = pencil_root_levels(random_pencil(1000 + seed, 10))
        for lower, upper in zip(levels[:-1], levels[1:]):
            slack = 1e-11 * upper[-1]
            assert np.all(upper[:-1] <= lower + slack) and np.all(lower <= upper[1:] + slack)


def test_pencil_rejects_nonpositive():
    P = random_pencil(0, 3)
    object.__setattr__(P, "b_tilde", np.array([1.0, -1.0]))
    with pytest.raises(InvalidParameterError):
        pencil_eigen_all(P)


def test_pencil_large_sample():
    P = build_pencil(EnsembleParams(40, 40.0), RngStream(123))
    values = pencil_eigen_all(P).values
    total = P.a_tilde.sum() + P.b_tilde.sum()
    assert abs(values.sum() - total) <= 1e-8 * total
    assert np.all(np.diff(values) < 0)


def test_dense_examples():
    assert np.allclose(dense_hermitian_eigen(DenseHermitian(np.eye(4))).values, 1.0)
    assert np.allclose(dense_hermitian_eigen(DenseHermitian(np.diag([3.0, 1.0, 2.0]))).values, [3, 2, 1])
    rng = np.random.default_rng(0)
    x = rng.normal(size=6) + 1j * rng.normal(size=6)
    vals = dense_hermitian_eigen(DenseHermitian(np.outer(x, x.conj()))).values
    norm2 = float(np.vdot(x, x).real)
    assert vals[0] == pytest.approx(norm2, rel=1e-12)
    assert np.all(np.abs(vals[1:]) < 1e-12 * norm2)


def test_dense_matches_lapack():
    rng = np.random.default_rng(2)
    H = rng.normal(size=(20, 12)) + 1j * rng.normal(size=(20, 12))
    W = H.conj().T @ H
    ref = np.sort(np.linalg.eigvalsh(W))[::-1]
    assert np.allclose(dense_hermitian_eigen(DenseHermitian(W)).values, ref, rtol=1e-10)


def test_dense_size_limit():
    with pytest.raises(InvalidParameterError):
        dense_hermitian_eigen(DenseHermitian(np.eye(129)))


@settings(max_examples=60, deadline=None)
@given(
    diag=st.lists(st.floats(0.01, 100.0), min_size=1, max_size=25),
    data=st.data(),
)
def test_tql_trace_and_spectrum(diag, data):
    n = len(diag)
    sub = data.draw(st.lists(st.floats(0.01, 100.0), min_size=n - 1, max_size=n - 1))
    T = to_tridiagonal(BidiagonalFactor(np.array(diag), np.array(sub)))
    s = tridiag_eigen_all(T)
    norm = np.abs(T.matrix()).sum(axis=1).max()
    assert abs(s.values.sum() - T.a.sum()) <= 1e-10 * n * norm
    ref = np.sort(np.linalg.eigvalsh(T.matrix()))[::-1]
    assert np.allclose(s.values, np.clip(ref, 0, None), atol=1e-10 * norm)
    assert np.all(np.diff(s.values) <= 0) and np.all(s.values >= 0)


@settings(max_examples=60, deadline=None)
@given(
    at=st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=12),
    data=st.data(),
)
def test_pencil_trace_property(at, data):
    n = len(at)
    bt = data.draw(st.lists(st.floats(1e-3, 1e3), min_size=n - 1, max_size=n - 1))
    P = BidiagonalPencil(np.array(at), np.array(bt))
    values = pencil_eigen_all(P).values
    total = sum(at) + sum(bt)
    assert abs(values.sum() - total) <= 1e-8 * total
    assert np.all(values > 0)
