"""Operationally testable (projective) measurements.

A measurement outcome is a rank-one projector of an observable's spectral
decomposition; its probability in a state rho is the trace of rho against
that projector.  Unions of distinct outcomes are additive.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    SpectralDecomposition,
    as_matrix,
    as_vector,
    hermitian_eigen,
    hermiticity_residual,
    outer,
)

#: Probabilities may stick out of [0, 1] by at most this much before the
#: excess is treated as a logic error rather than floating-point dust.
PROBABILITY_DUST = 1e-9


def clamp_probability(p: float, dust: float = PROBABILITY_DUST) -> float:
    """Clamp ``p`` into [0, 1] after checking the violation is mere dust."""
    if p < -dust or p > 1.0 + dust:
        raise ArithmeticError(f"probability {p!r} violates [0, 1] beyond dust threshold {dust}")
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class DensityOperator:
    """Trace-one positive Hermitian matrix describing a system state.

    Construction validates all three invariants and fails loudly instead of
    repairing the input; repairing silently would mask caller bugs.
    """

    matrix: np.ndarray
    tol: InitVar[float] = DEFAULT_TOL

    def __post_init__(self, tol: float) -> None:
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"state matrix must be square, got {m.shape}")
        residual = hermiticity_residual(m)
        if residual >= tol:
            raise ValueError(f"state is not Hermitian within {tol} (residual {residual:.3e})")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) >= tol:
            raise ValueError(f"state trace {tr!r} is not 1 within {tol}")
        eigenvalues = hermitian_eigen(m, tol=tol).eigenvalues
        if eigenvalues[0] < -tol:
            raise ValueError(f"state has negative eigenvalue {eigenvalues[0]:.3e}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector, tol: float = DEFAULT_TOL) -> "DensityOperator":
        """Rank-one state |v><v| from a (not necessarily normalized) vector."""
        v = as_vector(vector)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ValueError("cannot build a pure state from the zero vector")
        v = v / norm
        return cls(outer(v, v), tol=tol)

    @classmethod
    def diagonal(cls, probabilities: Sequence[float], tol: float = DEFAULT_TOL) -> "DensityOperator":
        """Classical mixture diag(p_1, ..., p_d)."""
        p = np.asarray(probabilities, dtype=float)
        return cls(np.diag(p.astype(np.complex128)), tol=tol)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=np.complex128) / dim)


@dataclass(frozen=True)
class Observable:
    """An observable given by its spectral decomposition.

    The eigenvectors define the measurement basis; the eigenvalues only label
    outcomes.  Constructing from a raw decomposition re-checks orthonormality.
    """

    spectral: SpectralDecomposition
    tol: InitVar[float] = DEFAULT_TOL

    def __post_init__(self, tol: float) -> None:
        gram = self.spectral.gram_residual()
        if gram >= tol:
            raise ValueError(f"eigenvectors are not orthonormal within {tol} (residual {gram:.3e})")

    @property
    def dim(self) -> int:
        return self.spectral.dim

    @classmethod
    def standard(cls, dim: int) -> "Observable":
        """Observable whose eigenbasis is the computational basis, eigenvalue n for mode n."""
        return cls(
            SpectralDecomposition(
                eigenvalues=np.arange(dim, dtype=float),
                eigenvectors=np.eye(dim, dtype=np.complex128),
            )
        )

    @classmethod
    def from_matrix(cls, matrix, tol: float = DEFAULT_TOL) -> "Observable":
        """Diagonalize a Hermitian matrix into an Observable."""
        return cls(hermitian_eigen(matrix, tol=tol))


def projector(obs: Observable, n: int) -> np.ndarray:
    """Projector onto the n-th eigenvector of the observable."""
    if not 0 <= n < obs.dim:
        raise IndexError(f"mode index {n} out of range for dimension {obs.dim}")
    return obs.spectral.projector(n)


def event_probability(rho: DensityOperator, obs: Observable, n: int) -> float:
    """Probability of observing outcome ``n``: the trace of rho against P_n."""
    if rho.dim != obs.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim}, observable {obs.dim}")
    if not 0 <= n < obs.dim:
        raise IndexError(f"mode index {n} out of range for dimension {obs.dim}")
    v = obs.spectral.eigenvectors[:, n]
    p = np.vdot(v, rho.matrix @ v)
    return clamp_probability(float(p.real))


def union_probability(rho: DensityOperator, obs: Observable, indices: Iterable[int]) -> float:
    """Probability of the standard (orthogonal, additive) union of outcomes.

    Computed as the trace of rho against the summed projector; additivity
    against the per-outcome sum is a property, not an implementation detail.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate indices in union: {idx}")
    for n in idx:
        if not 0 <= n < obs.dim:
            raise IndexError(f"mode index {n} out of range for dimension {obs.dim}")
    if not idx:
        return 0.0
    summed = np.zeros((obs.dim, obs.dim), dtype=np.complex128)
    for n in idx:
        summed += obs.spectral.projector(n)
    p = np.trace(rho.matrix @ summed)
    return clamp_probability(float(p.real))


def to_eigenbasis(rho: DensityOperator, obs: Observable) -> DensityOperator:
    """Rotate a state into the observable's eigenbasis (unitary conjugation).

    In the returned state the (m, n) entry is <m|rho|n> taken between the
    observable's eigenvectors.
    """
    if rho.dim != obs.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim}, observable {obs.dim}")
    v = obs.spectral.eigenvectors
    return DensityOperator(v.conj().T @ rho.matrix @ v)
