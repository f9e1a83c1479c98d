"""Ancilla-measurement simulation: mixtures, sampling, steering reports.

Measuring an observable whose eigenkets form an ancilla-side basis turns the
pure joint state into the classically correlated mixture of (system ket,
ancilla ket) pairs weighted by the basis-conditioned ensemble weights. Which
decomposition becomes visible is chosen by the basis; the reduced system
state is untouched by that choice, and each element is realized with
probability equal to its weight -- never with certainty unless the ensemble
is a singleton.

Sampling is pinned to NumPy's PCG64 generator seeded with a caller-supplied
integer, so counts are reproducible bit-for-bit. Parallel callers must split
streams via ``numpy.random.SeedSequence(seed).spawn(...)`` (or distinct
seeds) rather than sharing a generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WeightsNotNormalized
from .linalg import DEFAULT_RANK_TOL, DEFAULT_TOL, tensor_ket
from .purification import JointState, ensemble_from_basis

Mixture = list[tuple[float, np.ndarray, np.ndarray]]


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """One realized outcome: which element fired and the pair of kets found."""

    outcome_index: int
    s_ket: np.ndarray
    m_ket: np.ndarray


@dataclass(frozen=True, eq=False)
class SteeringReport:
    """Shot counts against the exact outcome distribution of one basis choice."""

    shots: int
    counts: list[int]
    expected_weights: np.ndarray
    post_density: np.ndarray


def measure_ancilla(
    joint: JointState,
    basis,
    rank_tol: float = DEFAULT_RANK_TOL,
    tol: float = DEFAULT_TOL,
) -> tuple[Mixture, np.ndarray]:
    """Mixture produced by measuring the ancilla in the given basis.

    Returns the list of ``(weight, system ket, ancilla ket)`` outcomes --
    exactly the basis-conditioned decomposition of the joint ket paired with
    its ancilla kets -- together with the post-measurement joint density
    matrix ``sum_j w_j |phi_j b_j><phi_j b_j|``. Tracing the ancilla out of
    that matrix returns the same reduced system state as the pure joint ket:
    the measurement does not disturb the system side.
    """
    ensemble, ancilla, _ = ensemble_from_basis(joint, basis, rank_tol, tol)
    mixture: Mixture = []
    dim = joint.dim_s * joint.dim_m
    post_density_sm = np.zeros((dim, dim), dtype=complex)
    for (s_ket, weight), m_ket in zip(ensemble.elements(), ancilla.kets):
        mixture.append((float(weight), s_ket, m_ket))
        pair = tensor_ket(s_ket, m_ket)
        post_density_sm += weight * np.outer(pair, np.conj(pair))
    return mixture, post_density_sm


def sample_outcomes(
    weights, shots: int, seed: int, tol: float = 1e-8
) -> np.ndarray:
    """Draw categorical outcome counts with a deterministic seeded generator.

    ``weights`` must sum to 1 within ``tol`` (else WeightsNotNormalized);
    they are renormalized exactly before sampling. Identical
    (weights, shots, seed) triples give identical counts on every platform
    because the generator algorithm (PCG64) and the seeding path are fixed.
    """
    probs = np.asarray(weights, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise WeightsNotNormalized("weights must be a non-empty 1-D list")
    if np.any(probs < 0.0):
        raise WeightsNotNormalized("weights must be non-negative")
    total = float(np.sum(probs))
    if abs(total - 1.0) > tol:
        raise WeightsNotNormalized(
            f"weights sum to {total!r}, expected 1 (tol {tol:.3e})"
        )
    if shots < 1:
        raise ValueError("shots must be a positive integer")
    rng = np.random.default_rng(seed)
    draws = rng.choice(probs.size, size=shots, p=probs / total)
    return np.bincount(draws, minlength=probs.size)


def realize(mixture: Mixture, outcome_index: int) -> MeasurementRecord:
    """Package one sampled outcome of a mixture as a MeasurementRecord."""
    _, s_ket, m_ket = mixture[outcome_index]
    return MeasurementRecord(outcome_index=outcome_index, s_ket=s_ket, m_ket=m_ket)


def steer(
    joint: JointState,
    basis,
    shots: int,
    seed: int,
    rank_tol: float = DEFAULT_RANK_TOL,
    tol: float = DEFAULT_TOL,
) -> SteeringReport:
    """Measure the ancilla, sample outcomes, and report the statistics.

    ``post_density`` is the system-side state of the exact (non-sampled)
    post-measurement mixture, i.e. the weighted projector sum over realized
    system kets, which coincides with the reduced state of the joint ket.
    """
    mixture, _ = measure_ancilla(joint, basis, rank_tol, tol)
    weights = np.array([w for w, _, _ in mixture], dtype=float)
    counts = sample_outcomes(weights, shots, seed)
    post_density = np.zeros((joint.dim_s, joint.dim_s), dtype=complex)
    for weight, s_ket, _ in mixture:
        post_density += weight * np.outer(s_ket, np.conj(s_ket))
    return SteeringReport(
        shots=int(shots),
        counts=[int(c) for c in counts],
        expected_weights=weights,
        post_density=post_density,
    )
