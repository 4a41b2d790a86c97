import numpy as np
import pytest

from quditbell.algebra import fourier_matrix, maximally_entangled, roots_of_unity
from quditbell.ditter import (
    DitterObservable,
    ExponentConstraintError,
    InvalidPhaseError,
    LabelConvention,
    PhaseVector,
    ditter_observable,
    geometric_phases,
    outcome_distribution,
    power_observable,
    product_observable,
    product_phases,
)


def random_phases(d, rng):
    return PhaseVector(d, np.exp(2j * np.pi * rng.random(d)))


def dual_form(phases: PhaseVector) -> np.ndarray:
    """Observable built the long way: conjugate the ditter unitary around the
    shift-by-label operator sum_k omega^k |k><k|."""
    d = phases.d
    f = fourier_matrix(d)
    u = f @ np.diag(phases.thetas)
    z = np.diag(roots_of_unity(d))
    return u.conj().T @ z @ u


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_explicit_form_matches_dual_form(d):
    rng = np.random.default_rng(d)
    for _ in range(20):
        phases = random_phases(d, rng)
        obs = ditter_observable(phases)
        assert np.abs(obs.matrix - dual_form(phases)).max() < 1e-12


@pytest.mark.parametrize("d", [3, 5])
def test_observable_is_unitary_with_root_outcomes(d):
    rng = np.random.default_rng(d)
    obs = ditter_observable(random_phases(d, rng))
    z = obs.matrix
    assert np.allclose(z @ z.conj().T, np.eye(d), atol=1e-12)
    eigs = np.linalg.eigvals(z)
    assert np.abs(np.sort(eigs**d) - 1.0).max() < 1e-9


def test_phase_vector_requires_unit_modulus():
    with pytest.raises(InvalidPhaseError):
        PhaseVector(3, np.array([1.0, 2.0, 1.0]))


def test_conjugate_label_convention_is_adjoint():
    rng = np.random.default_rng(0)
    phases = random_phases(4, rng)
    std = DitterObservable(phases, LabelConvention.STANDARD)
    conj = DitterObservable(phases, LabelConvention.CONJUGATE)
    assert np.abs(conj.matrix - std.matrix.conj().T).max() < 1e-15
    assert np.allclose(conj.labels, std.labels.conj())


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7, 8])
def test_power_d_minus_1_is_adjoint(d):
    rng = np.random.default_rng(d)
    for _ in range(10):
        phases = random_phases(d, rng)
        z = ditter_observable(phases).matrix
        zpow = np.linalg.matrix_power(z, d - 1)
        assert np.abs(zpow - power_observable(phases, d - 1).matrix).max() < 1e-12


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_product_identity_all_exponents(d):
    rng = np.random.default_rng(100 + d)
    for i in range(1, d - 1):
        j = d - 1 - i
        for _ in range(10):
            theta = random_phases(d, rng)
            lam = random_phases(d, rng)
            lhs = np.linalg.matrix_power(
                ditter_observable(theta).matrix, i
            ) @ np.linalg.matrix_power(ditter_observable(lam).matrix, j)
            rhs = product_observable(theta, lam, i, j).matrix
            assert np.abs(lhs - rhs).max() < 1e-12


def test_product_phases_rejects_bad_exponents():
    rng = np.random.default_rng(1)
    theta, lam = random_phases(5, rng), random_phases(5, rng)
    with pytest.raises(ExponentConstraintError):
        product_phases(theta, lam, 0, 4)
    with pytest.raises(ExponentConstraintError):
        product_phases(theta, lam, 4, 0)
    with pytest.raises(ExponentConstraintError):
        product_phases(theta, lam, 2, 3)


def test_geometric_phases():
    theta = np.exp(1j * np.pi / 6)
    pv = geometric_phases(4, theta, 2, +1)
    assert np.allclose(pv.thetas, theta ** (2 * np.arange(4)))
    pv_conj = geometric_phases(4, theta, 2, -1)
    assert np.allclose(pv_conj.thetas, pv.thetas.conj())


def test_outcome_distribution_normalized_and_matches_density_path():
    d = 3
    rng = np.random.default_rng(5)
    state = maximally_entangled(d)
    a = ditter_observable(random_phases(d, rng))
    b = ditter_observable(random_phases(d, rng))
    dist = outcome_distribution(state, a, b)
    assert dist.probs.shape == (d, d)
    assert abs(dist.probs.sum() - 1.0) < 1e-12
    dist_rho = outcome_distribution(state.to_density(), a, b)
    assert np.abs(dist.probs - dist_rho.probs).max() < 1e-12


def test_matched_conjugate_bases_anticorrelate_detectors():
    d = 4
    theta = np.exp(1j * np.pi / (2 * d))
    a = ditter_observable(geometric_phases(d, theta, 1, +1))
    b = ditter_observable(geometric_phases(d, theta, 1, -1))
    dist = outcome_distribution(maximally_entangled(d), a, b)
    for k in range(d):
        for kp in range(d):
            expected = 1.0 / d if (k + kp) % d == 0 else 0.0
            assert abs(dist.probs[k, kp] - expected) < 1e-12
