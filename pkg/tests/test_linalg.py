"""Core linear algebra: eigendecomposition, completion, tensor structure."""

import numpy as np
import pytest

from rhokit import (
    DimensionMismatch,
    NotHermitian,
    NotNormalized,
    NotOrthonormal,
    complete_orthonormal,
    eig_hermitian,
    numerical_rank,
    partial_trace_m,
    schmidt_decompose,
    schmidt_reconstruct,
    tensor_ket,
)
from helpers import bell_joint, computational, random_hermitian, random_ket, random_unitary


# ---------------------------------------------------------------------------
# eig_hermitian


def test_eig_identity():
    w, v = eig_hermitian(np.eye(2, dtype=complex), 1e-10)
    np.testing.assert_allclose(w, [1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(np.conj(v) @ v.T, np.eye(2), atol=1e-12)


def test_eig_diagonal_already_sorted():
    w, v = eig_hermitian(np.diag([0.75, 0.25]).astype(complex))
    np.testing.assert_allclose(w, [0.75, 0.25], atol=1e-12)
    assert abs(v[0][0]) == pytest.approx(1.0, abs=1e-12)
    assert abs(v[1][1]) == pytest.approx(1.0, abs=1e-12)


def test_eig_reconstruction_random():
    # Oracle: multiply the returned factors back together.
    for seed in range(20):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 4)
        w, v = eig_hermitian(h)
        rebuilt = np.einsum("s,si,sj->ij", w, v, np.conj(v))
        assert np.max(np.abs(rebuilt - h)) < 1e-9


def test_eig_sorted_descending():
    rng = np.random.default_rng(7)
    w, _ = eig_hermitian(random_hermitian(rng, 6))
    assert np.all(np.diff(w) <= 1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]), 1e-10)


def test_eig_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        eig_hermitian(np.zeros((2, 3)))


def test_eig_deterministic():
    rng = np.random.default_rng(3)
    h = random_hermitian(rng, 5)
    w1, v1 = eig_hermitian(h)
    w2, v2 = eig_hermitian(h)
    np.testing.assert_array_equal(w1, w2)
    np.testing.assert_array_equal(v1, v2)


# ---------------------------------------------------------------------------
# numerical_rank


def test_rank_full():
    assert numerical_rank([0.5, 0.5], 1e-12) == 2


def test_rank_numerically_zero_tail():
    assert numerical_rank([1.0, 3e-16], 1e-12) == 1


def test_rank_of_projector_spectrum():
    # Oracle: a rank-one projector built from a random ket.
    rng = np.random.default_rng(11)
    psi = random_ket(rng, 5)
    w, _ = eig_hermitian(np.outer(psi, np.conj(psi)))
    assert numerical_rank(w, 1e-12) == 1


# ---------------------------------------------------------------------------
# complete_orthonormal


def test_complete_from_first_canonical():
    basis = complete_orthonormal([computational(2, 0)], 2)
    np.testing.assert_allclose(basis, np.eye(2), atol=1e-12)


def test_complete_from_superposition():
    start = (computational(2, 0) + computational(2, 1)) / np.sqrt(2)
    basis = complete_orthonormal([start], 2)
    np.testing.assert_array_equal(basis[0], start)
    gram = np.conj(basis) @ basis.T
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-10)


def test_complete_empty_gives_canonical():
    basis = complete_orthonormal([], 3)
    np.testing.assert_allclose(basis, np.eye(3), atol=1e-12)


def test_complete_prefix_and_gram_random():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(2, 7))
        count = int(rng.integers(0, dim + 1))
        partial = random_unitary(rng, dim)[:count]
        basis = complete_orthonormal(partial, dim)
        assert basis.shape == (dim, dim)
        np.testing.assert_array_equal(basis[:count], partial)
        gram = np.conj(basis) @ basis.T
        assert np.max(np.abs(gram - np.eye(dim))) < 1e-10


def test_complete_rejects_overfull():
    with pytest.raises(DimensionMismatch):
        complete_orthonormal(np.eye(3, dtype=complex), 2)


def test_complete_rejects_non_orthonormal():
    with pytest.raises(NotOrthonormal):
        complete_orthonormal([computational(2, 0), computational(2, 0)], 2)


# ---------------------------------------------------------------------------
# tensor_ket


def test_tensor_canonical():
    out = tensor_ket(computational(2, 0), computational(2, 0))
    np.testing.assert_array_equal(out, computational(4, 0))


def test_tensor_superposition():
    s = (computational(2, 0) + computational(2, 1)) / np.sqrt(2)
    out = tensor_ket(s, computational(2, 0))
    expected = np.array([1.0, 0.0, 1.0, 0.0]) / np.sqrt(2)
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_tensor_matches_index_formula():
    # Oracle: brute-force double loop over the flat system-major index.
    rng = np.random.default_rng(5)
    s = random_ket(rng, 3)
    m = random_ket(rng, 4)
    out = tensor_ket(s, m)
    for i in range(3):
        for k in range(4):
            assert out[i * 4 + k] == pytest.approx(s[i] * m[k], abs=1e-15)


# ---------------------------------------------------------------------------
# partial_trace_m


def test_trace_bell_is_maximally_mixed():
    reduced = partial_trace_m(bell_joint().vec, 2, 2)
    np.testing.assert_allclose(reduced, np.eye(2) / 2, atol=1e-12)


def test_trace_product_recovers_projector():
    rng = np.random.default_rng(2)
    s = random_ket(rng, 3)
    m = random_ket(rng, 2)
    reduced = partial_trace_m(tensor_ket(s, m), 3, 2)
    np.testing.assert_allclose(reduced, np.outer(s, np.conj(s)), atol=1e-12)


def test_trace_matches_elementwise_sum():
    # Oracle: direct summation rho[i, j] = sum_k Psi[i, k] conj(Psi[j, k]).
    rng = np.random.default_rng(9)
    vec = random_ket(rng, 6)
    reduced = partial_trace_m(vec, 3, 2)
    psi = vec.reshape(3, 2)
    for i in range(3):
        for j in range(3):
            direct = sum(psi[i, k] * np.conj(psi[j, k]) for k in range(2))
            assert abs(reduced[i, j] - direct) < 1e-12


def test_trace_is_hermitian_psd_unit_trace():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        vec = random_ket(rng, 12)
        reduced = partial_trace_m(vec, 4, 3)
        assert np.max(np.abs(reduced - np.conj(reduced).T)) < 1e-10
        assert np.min(np.linalg.eigvalsh(reduced)) > -1e-10
        assert abs(np.trace(reduced).real - 1.0) < 1e-10


def test_trace_operator_input_matches_ket_input():
    rng = np.random.default_rng(4)
    vec = random_ket(rng, 6)
    from_ket = partial_trace_m(vec, 2, 3)
    from_op = partial_trace_m(np.outer(vec, np.conj(vec)), 2, 3)
    np.testing.assert_allclose(from_ket, from_op, atol=1e-12)


def test_tensor_then_trace_recovers_scaled_projector():
    rng = np.random.default_rng(6)
    s = random_ket(rng, 2)
    m = 0.5 * random_ket(rng, 3)  # deliberately unnormalized
    reduced = partial_trace_m(tensor_ket(s, m), 2, 3)
    expected = np.outer(s, np.conj(s)) * float(np.linalg.norm(m)) ** 2
    assert np.max(np.abs(reduced - expected)) < 1e-12


def test_trace_rejects_bad_dims():
    with pytest.raises(DimensionMismatch):
        partial_trace_m(np.zeros(5, dtype=complex), 2, 2)
    with pytest.raises(DimensionMismatch):
        partial_trace_m(np.zeros((3, 4), dtype=complex), 2, 2)


# ---------------------------------------------------------------------------
# schmidt_decompose


def test_schmidt_bell():
    form = schmidt_decompose(bell_joint().vec, 2, 2)
    np.testing.assert_allclose(form.coefficients, [1 / np.sqrt(2)] * 2, atol=1e-12)
    assert form.rank == 2


def test_schmidt_product():
    rng = np.random.default_rng(8)
    vec = tensor_ket(random_ket(rng, 2), random_ket(rng, 3))
    form = schmidt_decompose(vec, 2, 3)
    assert form.rank == 1
    assert form.coefficients[0] == pytest.approx(1.0, abs=1e-12)


def test_schmidt_known_coefficients():
    # Construct with coefficients (sqrt(0.9), sqrt(0.1)), then decompose.
    vec = np.sqrt(0.9) * tensor_ket(computational(2, 0), computational(2, 0))
    vec += np.sqrt(0.1) * tensor_ket(computational(2, 1), computational(2, 1))
    form = schmidt_decompose(vec, 2, 2)
    np.testing.assert_allclose(
        form.coefficients, [np.sqrt(0.9), np.sqrt(0.1)], atol=1e-12
    )


def test_schmidt_roundtrip_random():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        vec = random_ket(rng, 12)
        form = schmidt_decompose(vec, 3, 4)
        assert np.max(np.abs(schmidt_reconstruct(form) - vec)) < 1e-9
        assert sum(form.coefficients**2) == pytest.approx(1.0, abs=1e-10)
        gram_left = np.conj(form.left_kets) @ form.left_kets.T
        gram_right = np.conj(form.right_kets) @ form.right_kets.T
        assert np.max(np.abs(gram_left - np.eye(form.rank))) < 1e-10
        assert np.max(np.abs(gram_right - np.eye(form.rank))) < 1e-10


def test_schmidt_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        schmidt_decompose(np.ones(4, dtype=complex), 2, 2)


def test_schmidt_rejects_bad_dims():
    with pytest.raises(DimensionMismatch):
        schmidt_decompose(np.zeros(5, dtype=complex), 2, 2)
