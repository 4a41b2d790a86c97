"""Ditter (multiport beam splitter) measurement devices.

A ditter applies the unitary F @ diag(theta_0..theta_{d-1}) to a qudit, after
which d detectors read out the computational basis.  The combination realizes
a unitary observable with d-th-root-of-unity outcomes:

    Z_Theta = D_{Theta*} F^dag Z F D_Theta
            = sum_k theta_k theta*_{k+1} |k+1><k|        (indices mod d)

Products Z_Theta^i Z_Lambda^j with i + j = d - 1 are again single-ditter
observables, up to detecting Z^dag instead of Z, i.e. relabeling detector k
from omega^k to omega^{-k}.  The phase vector of the combined device is

    gamma_k = theta_k theta_{k+1} .. theta_{k-i-1}
              * lambda_{k-i} lambda_{k-i+1} .. lambda_k   (indices mod d)

which is the particular solution this library fixes as canonical.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import (
    ATOL,
    DensityState,
    DimensionMismatchError,
    EntangledState,
    fourier_matrix,
    roots_of_unity,
    tensor,
)

PHASE_TOL = 1e-9


class InvalidPhaseError(ValueError):
    """A phase-shift entry is not unit modulus."""


class ExponentConstraintError(ValueError):
    """Product exponents (i, j) violate 1 <= i <= d-2, i + j = d-1."""


@dataclass(frozen=True)
class PhaseVector:
    """d-tuple of unit-modulus phase shifts parameterizing one ditter."""

    d: int
    thetas: np.ndarray

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=complex)
        if thetas.shape != (self.d,):
            raise DimensionMismatchError(
                f"expected {self.d} phases, got shape {thetas.shape}"
            )
        if np.abs(np.abs(thetas) - 1.0).max() > PHASE_TOL:
            raise InvalidPhaseError("phase entries must have unit modulus")
        object.__setattr__(self, "thetas", thetas)

    def conjugate(self) -> "PhaseVector":
        return PhaseVector(self.d, self.thetas.conj())


class LabelConvention(enum.Enum):
    """How detector index k maps to the complex outcome label.

    STANDARD: detector k reports omega^k (plain Z detection).
    CONJUGATE: detector k reports omega^{-k} (Z^dag detection; physically a
    permutation of the detectors).
    """

    STANDARD = "standard"
    CONJUGATE = "conjugate"


@dataclass(frozen=True)
class DitterObservable:
    """A ditter plus detector labeling, as a unitary observable.

    The observable matrix is Z_Theta for the standard convention and
    Z_Theta^dag for the conjugate one; either way its eigenvalues are d-th
    roots of unity and the measurement is "apply the ditter unitary, see which
    detector fires".
    """

    phases: PhaseVector
    label_convention: LabelConvention = LabelConvention.STANDARD

    @property
    def d(self) -> int:
        return self.phases.d

    @cached_property
    def matrix(self) -> np.ndarray:
        d = self.phases.d
        th = self.phases.thetas
        z = np.zeros((d, d), dtype=complex)
        rows = (np.arange(d) + 1) % d
        z[rows, np.arange(d)] = th * th[rows].conj()
        if self.label_convention is LabelConvention.CONJUGATE:
            return z.conj().T
        return z

    @cached_property
    def ditter_unitary(self) -> np.ndarray:
        """The physical transformation F @ diag(phases) applied before detection."""
        return fourier_matrix(self.d) * self.phases.thetas[np.newaxis, :]

    @property
    def labels(self) -> np.ndarray:
        """Complex outcome label reported by each detector index."""
        w = roots_of_unity(self.d)
        if self.label_convention is LabelConvention.CONJUGATE:
            return w.conj()
        return w


def ditter_observable(phases: PhaseVector) -> DitterObservable:
    """Standard-convention observable Z_Theta for the given phase shifts."""
    return DitterObservable(phases, LabelConvention.STANDARD)


def geometric_phases(d: int, base: complex, a: int, sign: int = 1) -> PhaseVector:
    """Phase vector (1, theta^a, theta^{2a}, ..) with theta = base, or its
    conjugate family for sign = -1."""
    if abs(abs(base) - 1.0) > PHASE_TOL:
        raise InvalidPhaseError(f"base phase must be unit modulus, got |{base}|")
    return PhaseVector(d, np.asarray(base, dtype=complex) ** (sign * a * np.arange(d)))


def product_phases(theta: PhaseVector, lam: PhaseVector, i: int, j: int) -> PhaseVector:
    """Phase vector Gamma of the single ditter realizing Z_Theta^i Z_Lambda^j.

    Valid for 1 <= i <= d-2 with j = d-1-i; the returned Gamma satisfies
    Z_Theta^i Z_Lambda^j == Z_Gamma^dag.
    """
    d = theta.d
    if lam.d != d:
        raise DimensionMismatchError("phase vectors have different dimensions")
    if not (1 <= i <= d - 2) or i + j != d - 1:
        raise ExponentConstraintError(
            f"need 1 <= i <= {d - 2} and i + j = {d - 1}, got (i, j) = ({i}, {j})"
        )
    idx = np.arange(d)
    gammas = np.empty(d, dtype=complex)
    for k in range(d):
        th_part = theta.thetas[(k + idx[: d - i]) % d].prod()
        la_part = lam.thetas[(k - i + idx[: i + 1]) % d].prod()
        gammas[k] = th_part * la_part
    return PhaseVector(d, gammas)


def product_observable(
    theta: PhaseVector, lam: PhaseVector, i: int, j: int
) -> DitterObservable:
    """The product Z_Theta^i Z_Lambda^j as one conjugate-convention device."""
    return DitterObservable(product_phases(theta, lam, i, j), LabelConvention.CONJUGATE)


def power_observable(phases: PhaseVector, exponent: int) -> DitterObservable:
    """Z_Theta^exponent for exponent in {1, d-1}; d-1 gives Z_Theta^dag, i.e.
    the same ditter read with conjugate labels."""
    d = phases.d
    if exponent == 1:
        return DitterObservable(phases, LabelConvention.STANDARD)
    if exponent == d - 1:
        return DitterObservable(phases, LabelConvention.CONJUGATE)
    raise ExponentConstraintError(
        f"pure powers supported for exponent 1 or {d - 1}, got {exponent}"
    )


@dataclass(frozen=True)
class JointDistribution:
    """Joint detector statistics for one Alice/Bob observable pair."""

    probs: np.ndarray  # shape (d, d), indexed (k Alice, k' Bob)
    alice_labels: np.ndarray
    bob_labels: np.ndarray

    @property
    def d(self) -> int:
        return self.probs.shape[0]


def outcome_distribution(
    state: EntangledState | DensityState,
    alice: DitterObservable,
    bob: DitterObservable,
) -> JointDistribution:
    """P(k, k') for both parties' ditters acting on a shared state.

    P(k,k') = |<kk'| (U_A x U_B) |psi>|^2 for pure states, or the diagonal of
    (U_A x U_B) rho (U_A x U_B)^dag for densities.
    """
    d = alice.d
    if bob.d != d or state.d != d:
        raise DimensionMismatchError("state and observables must share one dimension")
    u = tensor(alice.ditter_unitary, bob.ditter_unitary)
    if isinstance(state, EntangledState):
        amps = u @ state.vector
        probs = np.abs(amps) ** 2
    else:
        probs = np.einsum("ij,jk,ik->i", u, state.matrix, u.conj()).real
    return JointDistribution(
        probs.reshape(d, d), alice.labels.copy(), bob.labels.copy()
    )
