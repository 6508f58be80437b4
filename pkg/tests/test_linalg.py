import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dirac_enclosures.errors import Singular
from dirac_enclosures.linalg import (
    EPS,
    dense_eig,
    dense_eigenvalues,
    dense_solve,
    hs_norm_2x2,
    polar_decompose_2x2,
    psd_sqrt_2x2,
    spectral_norm_2x2,
    tridiagonal_eigenvectors,
)

A_BLOCK = np.array([[0, 0], [-1, 0]])


def svd_oracle(A):
    """Largest singular value from the eigenvalues of ``A^* A``."""
    return np.sqrt(np.max(np.linalg.eigvalsh(A.conj().T @ A)))


def random_mats(rng, n):
    scale = 10.0 ** rng.uniform(-3, 3, (n, 1, 1))
    return scale * (rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2)))


@pytest.mark.parametrize("A, expected", [
    (np.eye(2), 1.0),
    (A_BLOCK, 1.0),
    (np.diag([3, 4j]), 4.0),
])
def test_spectral_norm_examples(A, expected):
    assert spectral_norm_2x2(A) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("A, expected", [
    (np.eye(2), np.sqrt(2)),
    (np.ones((2, 2)), 2.0),
    (A_BLOCK, 1.0),
])
def test_hs_norm_examples(A, expected):
    assert hs_norm_2x2(A) == pytest.approx(expected, rel=1e-15)


def test_spectral_norm_against_oracle(rng):
    A = random_mats(rng, 10_000)
    ours = spectral_norm_2x2(A)
    oracle = np.array([svd_oracle(a) for a in A])
    assert np.max(np.abs(ours - oracle) / oracle) <= 1e-12
    assert np.all(ours <= hs_norm_2x2(A) * (1 + 1e-15))


def test_spectral_norm_rejects_bad_shape():
    with pytest.raises(ValueError):
        spectral_norm_2x2(np.eye(3))


@pytest.mark.parametrize("A, U, W", [
    (np.eye(2), np.eye(2), np.eye(2)),
    (np.diag([-2.0, 0.0]), np.diag([-1.0, 0.0]), np.diag([2.0, 0.0])),
    (np.array([[0, 1], [0, 0]]), np.array([[0, 1], [0, 0]]), np.diag([0.0, 1.0])),
])
def test_polar_examples(A, U, W):
    u, w = polar_decompose_2x2(A)
    assert np.allclose(u, U, atol=1e-15)
    assert np.allclose(w, W, atol=1e-15)


def check_polar(A):
    U, W = polar_decompose_2x2(A)
    nrm = max(spectral_norm_2x2(A), 1e-300)
    assert np.max(np.abs(U @ W - A)) <= 1e-12 * max(nrm, 1.0)
    assert np.allclose(W, W.conj().T, rtol=0, atol=1e-15 * nrm)
    assert np.min(np.linalg.eigvalsh(W)) >= -1e-13 * nrm
    # U^* U is the orthogonal projector onto range(W)
    vals, vecs = np.linalg.eigh(W)
    keep = vals > 2 * EPS * nrm
    P = vecs[:, keep] @ vecs[:, keep].conj().T
    assert np.max(np.abs(U.conj().T @ U - P)) <= 1e-10


def test_polar_identities_random(rng):
    for A in random_mats(rng, 500):
        check_polar(A / max(1.0, spectral_norm_2x2(A)))


def test_polar_rank_one(rng):
    for _ in range(100):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        y = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        check_polar(np.outer(x, y.conj()))


def test_polar_zero():
    U, W = polar_decompose_2x2(np.zeros((2, 2)))
    assert not U.any() and not W.any()


cplx = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(arrays(complex, (2, 2), elements=cplx))
def test_polar_property(A):
    check_polar(A)


def test_psd_sqrt(rng):
    for A in random_mats(rng, 200):
        W = A.conj().T @ A
        R = psd_sqrt_2x2(W)
        assert np.max(np.abs(R @ R - W)) <= 1e-12 * np.max(np.abs(W))
        assert np.allclose(R, R.conj().T, atol=1e-13 * np.max(np.abs(R)))


def test_psd_sqrt_clamps_roundoff():
    W = np.array([[1.0, 0.0], [0.0, -1e-17]])
    R = psd_sqrt_2x2(W)
    assert np.all(np.isfinite(R)) and R[1, 1] == 0


@pytest.mark.parametrize("A, expected", [
    (np.diag([1, 2j, -3]), [1, 2j, -3]),
    (np.array([[0, -1], [1, 0]]), [1j, -1j]),
    (np.array([[0, 1], [0, 0]]), [0, 0]),
])
def test_eigenvalue_examples(A, expected):
    vals = dense_eigenvalues(A)
    assert len(vals) == len(expected)
    for e in expected:
        assert np.min(np.abs(vals - e)) < 1e-12


def test_eigenvalue_residual(rng):
    for n in [1, 2, 5, 17, 50]:
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        vals = dense_eigenvalues(A)
        nrm = np.linalg.norm(A, 2)
        for mu in vals:
            smin = np.linalg.svd(A - mu * np.eye(n), compute_uv=False)[-1]
            assert smin <= 10 * n * EPS * nrm


def test_eigenvalues_empty_and_nonsquare():
    assert dense_eigenvalues(np.zeros((0, 0))).shape == (0,)
    with pytest.raises(ValueError):
        dense_eigenvalues(np.zeros((2, 3)))


def test_dense_eig_vectors(rng):
    A = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
    vals, vecs = dense_eig(A)
    assert np.max(np.abs(A @ vecs - vecs * vals)) < 1e-12 * np.linalg.norm(A)


def test_solve_examples(rng):
    B = rng.standard_normal((2, 3))
    assert np.allclose(dense_solve(np.eye(2), B), B)
    assert np.allclose(dense_solve(np.diag([2.0, 4.0]), np.eye(2)), np.diag([0.5, 0.25]))
    with pytest.raises(Singular):
        dense_solve(np.array([[1.0, 2.0], [2.0, 4.0]]), np.eye(2))


def test_solve_random(rng):
    A = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40))
    B = rng.standard_normal((40, 2))
    X = dense_solve(A, B)
    assert np.max(np.abs(A @ X - B)) < 1e-11


def test_tridiagonal_inverse_iteration(rng):
    n = 60
    A = (np.diag(rng.standard_normal(n) + 1j * rng.standard_normal(n))
         + np.diag(rng.standard_normal(n - 1), 1) + np.diag(rng.standard_normal(n - 1), -1))
    vals = dense_eigenvalues(A)
    vecs = tridiagonal_eigenvectors(A, vals)
    assert np.allclose(np.linalg.norm(vecs, axis=0), 1.0)
    res = np.linalg.norm(A @ vecs - vecs * vals, axis=0)
    assert np.max(res) < 1e-8 * np.linalg.norm(A, 2)
