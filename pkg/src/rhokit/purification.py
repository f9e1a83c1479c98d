"""Constructive machinery connecting ensembles, purifications, and ancillae.

Everything here operates on a bipartite picture: a system space of dimension
``dim_s`` tensored (system-major) with an ancilla space of dimension
``dim_m``. A normalized joint ket whose reduced system state equals a given
density matrix is a *purification* of it; an orthonormal ket list on the
ancilla side correlated one-to-one with ensemble elements is that ensemble's
*ancilla*. The functions below construct these objects explicitly and convert
between any two ensembles of the same density matrix via unitaries on the
ancilla factor alone.

Phase convention: ensemble amplitudes are always the real positive square
roots of the weights; complex phases are absorbed into the ancilla kets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import RhoEnsemble, ensemble_to_density
from .errors import (
    DensitiesDiffer,
    DimensionMismatch,
    NotInSupport,
    NotNormalized,
    NotOrthonormal,
    NotOrthonormalBasis,
    NotUnitary,
    OrderExceedsAncillaDim,
    TracesDiffer,
)
from .linalg import (
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    as_ket,
    as_ket_list,
    as_operator,
    complete_orthonormal,
    dagger,
    eig_hermitian,
    gram_matrix,
    max_abs,
    numerical_rank,
    partial_trace_m,
    schmidt_decompose,
)

# Construction-time sanity checks on value types are looser than the
# per-operation tolerances so that round-tripped values are never rejected.
_CONSTRUCT_TOL = 1e-8

# Vector lists derived inside the rotation construction pick up error scaled
# by the inverse smallest supported weight; their orthonormality is re-checked
# at this internal tolerance before basis completion.
_INTERNAL_ORTH_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class JointState:
    """A normalized ket on the system-major product of two factors."""

    dim_s: int
    dim_m: int
    vec: np.ndarray

    def __post_init__(self):
        vec = as_ket(self.vec)
        if self.dim_s < 1 or self.dim_m < 1:
            raise DimensionMismatch("factor dimensions must be positive")
        if vec.shape[0] != self.dim_s * self.dim_m:
            raise DimensionMismatch(
                f"joint ket has length {vec.shape[0]}, expected "
                f"{self.dim_s}*{self.dim_m}={self.dim_s * self.dim_m}"
            )
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > _CONSTRUCT_TOL:
            raise NotNormalized(f"joint ket has norm {norm!r}, expected 1")
        object.__setattr__(self, "vec", vec)

    def as_matrix(self) -> np.ndarray:
        """The ket reshaped to (dim_s, dim_m); entry [i, k] pairs e_i with m_k."""
        return self.vec.reshape(self.dim_s, self.dim_m)

    def reduced_system(self) -> np.ndarray:
        """Reduced density matrix on the system factor."""
        return partial_trace_m(self.vec, self.dim_s, self.dim_m)


@dataclass(frozen=True, eq=False)
class Ancilla:
    """An orthonormal ket list on the ancilla factor, one ket per element."""

    dim_m: int
    kets: np.ndarray

    def __post_init__(self):
        kets = as_ket_list(self.kets, dim=self.dim_m)
        if kets.shape[0] > self.dim_m:
            raise DimensionMismatch(
                f"{kets.shape[0]} ancilla kets cannot fit in dimension {self.dim_m}"
            )
        if kets.shape[0]:
            deviation = max_abs(gram_matrix(kets) - np.eye(kets.shape[0]))
            if deviation > _CONSTRUCT_TOL:
                raise NotOrthonormal(
                    f"ancilla kets deviate from orthonormality by {deviation:.3e}"
                )
        object.__setattr__(self, "kets", kets)

    @property
    def count(self) -> int:
        return int(self.kets.shape[0])


@dataclass(frozen=True, eq=False)
class UMap:
    """Coefficients relating one ensemble's amplitude-weighted kets to another's.

    ``coeffs`` has orthonormal columns; column k belongs to source element k,
    while row j pairs with target element j for j below the target order and
    with a padding direction (where the relation gives zero) beyond it. When
    the map was produced by rotating purifications, ``generator`` records the
    ancilla-side unitary and ``basis`` the row ket list in which the
    coefficients were taken, so the three can be cross-checked.
    """

    coeffs: np.ndarray
    generator: np.ndarray | None = None
    basis: np.ndarray | None = None

    def __post_init__(self):
        coeffs = as_operator(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if self.generator is not None:
            object.__setattr__(self, "generator", as_operator(self.generator))
        if self.basis is not None:
            object.__setattr__(
                self, "basis", as_ket_list(self.basis, dim=coeffs.shape[0])
            )

    @property
    def rows(self) -> int:
        return int(self.coeffs.shape[0])

    @property
    def cols(self) -> int:
        return int(self.coeffs.shape[1])


def check_umap(u: UMap, tol: float = DEFAULT_TOL) -> list[str]:
    """Report every violated UMap invariant (empty list when clean).

    Checks column orthonormality of the coefficients, unitarity of the
    generator when present, orthonormality of the recorded row basis when
    present, and the consistency ``coeffs[j, k] = <b_j|U|b_k>`` whenever both
    generator and basis are recorded.
    """
    report: list[str] = []
    col_dev = max_abs(dagger(u.coeffs) @ u.coeffs - np.eye(u.cols))
    if col_dev > tol:
        report.append(f"coefficient columns deviate from orthonormality by {col_dev:.3e}")
    if u.generator is not None:
        gen = u.generator
        if gen.shape[0] != gen.shape[1]:
            report.append(f"generator is not square: {gen.shape}")
        else:
            unit_dev = max_abs(dagger(gen) @ gen - np.eye(gen.shape[0]))
            if unit_dev > tol:
                report.append(f"generator deviates from unitarity by {unit_dev:.3e}")
    if u.basis is not None:
        basis_dev = max_abs(gram_matrix(u.basis) - np.eye(u.basis.shape[0]))
        if basis_dev > tol:
            report.append(f"row basis deviates from orthonormality by {basis_dev:.3e}")
        if u.basis.shape[0] != u.rows:
            report.append(
                f"row basis has {u.basis.shape[0]} kets for {u.rows} coefficient rows"
            )
    if u.generator is not None and u.basis is not None and not report:
        expected = np.conj(u.basis) @ u.generator @ u.basis.T
        gen_dev = max_abs(expected[:, : u.cols] - u.coeffs)
        if gen_dev > max(10 * tol, 1e-12):
            report.append(
                f"coefficients deviate from <b_j|U|b_k> by {gen_dev:.3e}"
            )
    return report


def lemma_unitary(
    chi: JointState,
    phi: JointState,
    tol: float = DEFAULT_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> np.ndarray:
    """Ancilla-side unitary U with ``(1 (x) U) phi = chi``.

    Requires both joint kets to share the same reduced system state within
    ``tol`` (max norm), else TracesDiffer. The construction eigendecomposes
    the shared reduced state, normalizes each ket's ancilla-side partner
    vectors on the supported eigenkets into two orthonormal lists, completes
    both to full bases, and pairs them off.
    """
    if (chi.dim_s, chi.dim_m) != (phi.dim_s, phi.dim_m):
        raise DimensionMismatch(
            f"joint states have different factor dimensions: "
            f"({chi.dim_s}, {chi.dim_m}) vs ({phi.dim_s}, {phi.dim_m})"
        )
    x = chi.reduced_system()
    deviation = max_abs(x - phi.reduced_system())
    if deviation > tol:
        raise TracesDiffer(
            f"reduced system states differ by {deviation:.3e} (tol {tol:.3e})"
        )
    weights, system_kets = eig_hermitian(x, max(tol, _INTERNAL_ORTH_TOL))
    n = numerical_rank(weights, rank_tol)

    a_chi = chi.as_matrix()
    a_phi = phi.as_matrix()
    supported = np.conj(system_kets[:n])
    inv_amp = 1.0 / np.sqrt(weights[:n])
    b_kets = (supported @ a_chi) * inv_amp[:, None]
    c_kets = (supported @ a_phi) * inv_amp[:, None]

    b_full = complete_orthonormal(b_kets, chi.dim_m, _INTERNAL_ORTH_TOL)
    c_full = complete_orthonormal(c_kets, chi.dim_m, _INTERNAL_ORTH_TOL)
    return b_full.T @ np.conj(c_full)


def purify(
    e: RhoEnsemble,
    dim_m: int,
    tol: float = DEFAULT_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> tuple[JointState, Ancilla]:
    """Purify an ensemble against the canonical ancilla kets.

    Element j of the ensemble is paired with canonical basis vector e_j of
    the ancilla space, giving the joint ket ``sum_j sqrt(w_j) phi_j (x) e_j``
    whose reduced system state is exactly the ensemble's density matrix.
    Raises OrderExceedsAncillaDim when the ensemble has more elements than
    the ancilla space has dimensions.
    """
    ensemble_to_density(e, tol, rank_tol)  # raises InvalidEnsemble
    if e.order > dim_m:
        raise OrderExceedsAncillaDim(
            f"ensemble order {e.order} exceeds ancilla dimension {dim_m}"
        )
    amplitudes = np.sqrt(e.weights)
    block = np.zeros((e.dim, dim_m), dtype=complex)
    block[:, : e.order] = (amplitudes[:, None] * e.kets).T
    joint = JointState(dim_s=e.dim, dim_m=dim_m, vec=block.reshape(-1))
    ancilla = Ancilla(dim_m=dim_m, kets=np.eye(dim_m, dtype=complex)[: e.order])
    return joint, ancilla


def match_purification(
    e: RhoEnsemble,
    target: JointState,
    tol: float = DEFAULT_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> Ancilla:
    """Find the ancilla realizing an ensemble inside a given joint state.

    The ensemble's density matrix must equal the target's reduced system
    state within ``tol`` (else TracesDiffer). The canonical purification is
    rotated onto the target with ``lemma_unitary``; the rotated canonical
    kets are the ancilla, satisfying
    ``target.vec = sum_j sqrt(w_j) phi_j (x) b_j`` up to the rotation
    residual, with all phases carried by the ancilla kets.
    """
    density = ensemble_to_density(e, tol, rank_tol)
    deviation = max_abs(density.matrix - target.reduced_system())
    if deviation > tol:
        raise TracesDiffer(
            f"ensemble density and reduced target state differ by {deviation:.3e}"
            f" (tol {tol:.3e})"
        )
    if e.order > target.dim_m:
        raise OrderExceedsAncillaDim(
            f"ensemble order {e.order} exceeds ancilla dimension {target.dim_m}"
        )
    base_joint, base_ancilla = purify(e, target.dim_m, tol, rank_tol)
    rotation = lemma_unitary(target, base_joint, tol, rank_tol)
    return Ancilla(dim_m=target.dim_m, kets=base_ancilla.kets @ rotation.T)


def ensemble_from_basis(
    joint: JointState,
    basis,
    rank_tol: float = DEFAULT_RANK_TOL,
    tol: float = DEFAULT_TOL,
) -> tuple[RhoEnsemble, Ancilla, list[int]]:
    """Condition a joint ket on each ket of an ancilla-side basis.

    For basis ket b_k the unnormalized conditional system vector is
    ``(1 (x) <b_k|) joint``; its squared norm is the element weight. Kets
    with weight above ``rank_tol`` become ensemble elements (normalized, in
    basis order), and ``member_indices`` records which basis positions they
    came from. The member basis kets form the returned ancilla, and
    ``sum_k sqrt(w_k) phi_k (x) b_k`` over members reconstructs the joint
    ket up to the discarded sub-threshold tails.

    A degenerate basis choice can produce collinear conditional vectors;
    the returned ensemble then fails ``validate_ensemble``, which callers
    should apply when they need a strictly valid ensemble.
    """
    kets = as_ket_list(basis, dim=joint.dim_m)
    if kets.shape[0] != joint.dim_m:
        raise NotOrthonormalBasis(
            f"basis has {kets.shape[0]} kets, expected {joint.dim_m}"
        )
    deviation = max_abs(gram_matrix(kets) - np.eye(joint.dim_m))
    if deviation > max(tol, _CONSTRUCT_TOL):
        raise NotOrthonormalBasis(
            f"basis deviates from orthonormality by {deviation:.3e}"
        )
    conditionals = joint.as_matrix() @ np.conj(kets).T
    weights = np.sum(np.abs(conditionals) ** 2, axis=0)
    member_indices = [int(k) for k in np.nonzero(weights > rank_tol)[0]]
    if not member_indices:
        raise NotNormalized("joint ket has no weight above the rank cutoff")
    member_weights = weights[member_indices]
    member_kets = (conditionals[:, member_indices] / np.sqrt(member_weights)).T
    ensemble = RhoEnsemble(kets=member_kets, weights=member_weights)
    ancilla = Ancilla(dim_m=joint.dim_m, kets=kets[member_indices])
    return ensemble, ancilla, member_indices


def umap_between(
    from_e: RhoEnsemble,
    to_e: RhoEnsemble,
    tol: float = DEFAULT_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> UMap:
    """Construct a coefficient map carrying one decomposition into another.

    Both ensembles must decompose the same density matrix within ``tol``
    (else DensitiesDiffer). They are purified against canonical ancillae in
    a common ancilla space of dimension ``max(order_from, order_to)``, the
    source purification is rotated onto the target one, and the rotation is
    returned as the generator; its first ``order_from`` columns are the
    coefficients. Row j pairs with target element j for ``j < order_to``;
    for larger j the mapped combination is zero.
    """
    rho_from = ensemble_to_density(from_e, tol, rank_tol)
    rho_to = ensemble_to_density(to_e, tol, rank_tol)
    deviation = max_abs(rho_from.matrix - rho_to.matrix)
    if deviation > tol:
        raise DensitiesDiffer(
            f"ensemble densities differ by {deviation:.3e} (tol {tol:.3e})"
        )
    dim_m = max(from_e.order, to_e.order)
    joint_from, _ = purify(from_e, dim_m, tol, rank_tol)
    joint_to, _ = purify(to_e, dim_m, tol, rank_tol)
    rotation = lemma_unitary(joint_to, joint_from, tol, rank_tol)
    return UMap(
        coeffs=rotation[:, : from_e.order],
        generator=rotation,
        basis=np.eye(dim_m, dtype=complex),
    )


def apply_unitary_umap(
    joint: JointState,
    basis,
    u,
    rank_tol: float = DEFAULT_RANK_TOL,
    tol: float = DEFAULT_TOL,
) -> tuple[RhoEnsemble, UMap]:
    """Rotate an ancilla basis by a unitary and extract the induced map.

    ``basis`` implies a source ensemble (its basis-conditioned decomposition
    of ``joint``); the rotated kets ``u b_k`` imply the target ensemble.
    Both decompose the same reduced system state. The returned coefficients
    are taken in the rotated basis reordered members-first, so row j pairs
    with target element j below the target order and gives zero beyond it;
    columns run over source elements.
    """
    source_kets = as_ket_list(basis, dim=joint.dim_m)
    operator = as_operator(u)
    if operator.shape != (joint.dim_m, joint.dim_m):
        raise DimensionMismatch(
            f"unitary has shape {operator.shape}, expected "
            f"({joint.dim_m}, {joint.dim_m})"
        )
    unit_dev = max_abs(dagger(operator) @ operator - np.eye(joint.dim_m))
    if unit_dev > max(tol, _CONSTRUCT_TOL):
        raise NotUnitary(f"matrix deviates from unitarity by {unit_dev:.3e}")
    rotated_kets = source_kets @ operator.T

    from_e, from_ancilla, from_members = ensemble_from_basis(
        joint, source_kets, rank_tol, tol
    )
    to_e, _, to_members = ensemble_from_basis(joint, rotated_kets, rank_tol, tol)

    row_order = to_members + [k for k in range(joint.dim_m) if k not in to_members]
    col_order = from_members + [k for k in range(joint.dim_m) if k not in from_members]
    row_kets = rotated_kets[row_order]
    paired_source = source_kets[col_order]
    coeffs = np.conj(row_kets) @ from_ancilla.kets.T
    generator = paired_source.T @ np.conj(row_kets)
    return to_e, UMap(coeffs=coeffs, generator=generator, basis=row_kets)


def ensemble_containing(
    joint: JointState,
    xi,
    rank_tol: float = DEFAULT_RANK_TOL,
    tol: float = DEFAULT_TOL,
) -> tuple[RhoEnsemble, np.ndarray]:
    """Build a decomposition whose first element is a chosen support vector.

    The joint ket is Schmidt-decomposed; expanding the target in the left
    Schmidt kets gives overlaps gamma_s, and the first ancilla ket is formed
    with column coefficients ``(gamma_s / c_s) / sqrt(sum_t |gamma_t/c_t|^2)``
    against the right Schmidt kets. Completing that ket to a full basis and
    conditioning on it yields an ensemble whose first element is the target
    (same phase) with weight ``1 / sum_t |gamma_t/c_t|^2``.

    Raises NotNormalized for a non-unit target and NotInSupport when the
    target has components outside the supported left Schmidt kets beyond
    ``rank_tol``.
    """
    target = as_ket(xi)
    if target.shape[0] != joint.dim_s:
        raise DimensionMismatch(
            f"target has dimension {target.shape[0]}, expected {joint.dim_s}"
        )
    norm = float(np.linalg.norm(target))
    if abs(norm - 1.0) > tol:
        raise NotNormalized(f"target has norm {norm!r}, expected 1 (tol {tol:.3e})")
    form = schmidt_decompose(joint.vec, joint.dim_s, joint.dim_m, rank_tol, tol)
    overlaps = np.conj(form.left_kets) @ target
    residual = target - form.left_kets.T @ overlaps
    residual_norm = float(np.linalg.norm(residual))
    if residual_norm > max(rank_tol, 1e-12):
        raise NotInSupport(
            f"target sticks out of the support by {residual_norm:.3e}"
            f" (tol {rank_tol:.3e})"
        )
    ratios = overlaps / form.coefficients
    column = ratios / np.linalg.norm(ratios)
    first_ket = np.conj(column) @ form.right_kets
    # Complete inside the reduced-state support first: out-of-support
    # directions carry zero weight, and mixing them in can strand several
    # completion kets on one residual support direction, which would make
    # their conditional elements collinear.
    basis = complete_orthonormal(
        [first_ket], joint.dim_m, _INTERNAL_ORTH_TOL, prefer=form.right_kets
    )
    ensemble, _, _ = ensemble_from_basis(joint, basis, rank_tol, tol)
    return ensemble, basis
