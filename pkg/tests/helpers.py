"""Shared random-value generators and oracles for the test suite."""

from __future__ import annotations

import numpy as np

from rhokit import JointState, RhoEnsemble


def random_ket(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(rng, dim):
    """Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[None, :]


def random_basis(rng, dim):
    """Orthonormal ket list (rows) spanning the whole space."""
    return random_unitary(rng, dim)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a + a.conj().T


def random_weights(rng, n):
    w = rng.random(n) + 0.1
    return w / w.sum()


def random_ensemble(rng, dim, order):
    """Valid ensemble with pairwise well-separated random kets."""
    while True:
        kets = np.stack([random_ket(rng, dim) for _ in range(order)])
        gram = np.abs(np.conj(kets) @ kets.T)
        np.fill_diagonal(gram, 0.0)
        if np.max(gram, initial=0.0) < 0.999:
            return RhoEnsemble(kets=kets, weights=random_weights(rng, order))


def random_joint(rng, dim_s, dim_m):
    return JointState(dim_s=dim_s, dim_m=dim_m, vec=random_ket(rng, dim_s * dim_m))


def computational(dim, index):
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def plus_ket():
    return np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)


def minus_ket():
    return np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)


def bell_joint():
    """(e1 (x) e1 + e2 (x) e2) / sqrt(2) on a 2 x 2 product space."""
    vec = np.zeros(4, dtype=complex)
    vec[0] = vec[3] = 1.0 / np.sqrt(2.0)
    return JointState(dim_s=2, dim_m=2, vec=vec)


def reconstruct_joint(ensemble, ancilla_kets, dim_m):
    """sum_j sqrt(w_j) phi_j (x) b_j as a flat system-major vector."""
    dim_s = ensemble.dim
    out = np.zeros(dim_s * dim_m, dtype=complex)
    for (ket, weight), b in zip(ensemble.elements(), ancilla_kets):
        out += np.sqrt(weight) * np.kron(ket, b)
    return out


def mapping_residual(umap, from_e, to_e):
    """Worst-row deviation of the coefficient map relation.

    Row j of ``coeffs @ (sqrt(v_k) psi_k)`` must equal sqrt(w_j) phi_j for
    j below the target order and vanish beyond it.
    """
    lhs = umap.coeffs @ (np.sqrt(from_e.weights)[:, None] * from_e.kets)
    rhs = np.zeros_like(lhs)
    rhs[: to_e.order] = np.sqrt(to_e.weights)[:, None] * to_e.kets
    return float(np.max(np.abs(lhs - rhs)))


def weighted_projector_sum(ensemble):
    return np.einsum(
        "s,si,sj->ij", ensemble.weights, ensemble.kets, np.conj(ensemble.kets)
    )
