"""Dense complex linear algebra for qudits and qudit pairs.

Everything downstream (ditter observables, Bell operators, the protocol
simulator) works with plain numpy arrays in dimension d or d*d.  States of an
entangled pair are kept in Schmidt-diagonal form sum_j delta_j |jj>, expanded
to a d*d vector on demand with the Alice index major: basis element |k k'> sits
at flat index k*d + k'.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ATOL = 1e-12


class InvalidDimensionError(ValueError):
    """Dimension is not a supported qudit dimension (d >= 2)."""


class DegenerateStateError(ValueError):
    """State coefficients are all zero and cannot be normalized."""


class DimensionMismatchError(ValueError):
    """Operands live in different qudit dimensions."""


def omega(d: int) -> complex:
    """Primitive d-th root of unity e^{2i pi/d}."""
    return np.exp(2j * np.pi / d)


def roots_of_unity(d: int) -> np.ndarray:
    """All d-th roots of unity, omega^0 .. omega^{d-1}."""
    return np.exp(2j * np.pi * np.arange(d) / d)


def fourier_matrix(d: int) -> np.ndarray:
    """Unitary discrete Fourier matrix, entry (k,l) = omega^{kl} / sqrt(d).

    The 1/sqrt(d) factor is folded in here so that a ditter unitary is simply
    fourier_matrix(d) @ diag(phases).
    """
    if d < 2:
        raise InvalidDimensionError(f"need dimension >= 2, got {d}")
    k = np.arange(d)
    return omega(d) ** np.outer(k, k) / np.sqrt(d)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor's indices major."""
    return np.kron(a, b)


@dataclass(frozen=True)
class EntangledState:
    """Bipartite qudit state sum_j delta_j |jj> with unit-norm coefficients."""

    d: int
    deltas: np.ndarray

    def __post_init__(self):
        deltas = np.asarray(self.deltas, dtype=complex)
        if deltas.shape != (self.d,):
            raise DimensionMismatchError(
                f"expected {self.d} coefficients, got shape {deltas.shape}"
            )
        norm = np.linalg.norm(deltas)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"coefficients not normalized (norm {norm})")
        object.__setattr__(self, "deltas", deltas)

    @property
    def vector(self) -> np.ndarray:
        """Expansion into the d*d computational basis (Alice index major)."""
        vec = np.zeros(self.d * self.d, dtype=complex)
        idx = np.arange(self.d)
        vec[idx * self.d + idx] = self.deltas
        return vec

    def projector(self) -> np.ndarray:
        v = self.vector
        return np.outer(v, v.conj())

    def to_density(self) -> "DensityState":
        return DensityState(self.d, self.projector())


@dataclass(frozen=True)
class DensityState:
    """Mixed state of a qudit pair: d^2 x d^2 Hermitian PSD matrix, trace 1."""

    d: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n = self.d * self.d
        if m.shape != (n, n):
            raise DimensionMismatchError(f"expected {n}x{n} matrix, got {m.shape}")
        if np.abs(m - m.conj().T).max() > ATOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > ATOL:
            raise ValueError(f"trace is {np.trace(m)}, expected 1")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)


def make_state(d: int, deltas) -> EntangledState:
    """Build an entangled state from (unnormalized) Schmidt coefficients."""
    if d < 2:
        raise InvalidDimensionError(f"need dimension >= 2, got {d}")
    deltas = np.asarray(deltas, dtype=complex)
    if deltas.shape != (d,):
        raise DimensionMismatchError(
            f"expected {d} coefficients, got shape {deltas.shape}"
        )
    norm = np.linalg.norm(deltas)
    if norm == 0.0:
        raise DegenerateStateError("all coefficients are zero")
    return EntangledState(d, deltas / norm)


def maximally_entangled(d: int) -> EntangledState:
    """The uniform state (1/sqrt(d)) sum_j |jj>."""
    return make_state(d, np.ones(d))


def psi3() -> EntangledState:
    return maximally_entangled(3)


def psi4() -> EntangledState:
    return maximally_entangled(4)


def psi5() -> EntangledState:
    """(|00> + |11> + |22> + |33> - i|44>) / sqrt(5)."""
    return make_state(5, [1, 1, 1, 1, -1j])


REFERENCE_STATES = {"psi3": psi3, "psi4": psi4, "psi5": psi5}
