import numpy as np
import pytest

from quditbell.algebra import (
    DegenerateStateError,
    DensityState,
    DimensionMismatchError,
    EntangledState,
    InvalidDimensionError,
    fourier_matrix,
    make_state,
    maximally_entangled,
    omega,
    psi3,
    psi4,
    psi5,
    roots_of_unity,
    tensor,
)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 8])
def test_fourier_matrix_is_unitary(d):
    f = fourier_matrix(d)
    assert np.allclose(f @ f.conj().T, np.eye(d), atol=1e-12)


def test_fourier_matrix_entries(d=4):
    f = fourier_matrix(d)
    w = omega(d)
    for k in range(d):
        for l in range(d):
            assert abs(f[k, l] - w ** (k * l) / np.sqrt(d)) < 1e-12


def test_fourier_matrix_rejects_bad_dimension():
    with pytest.raises(InvalidDimensionError):
        fourier_matrix(1)


@pytest.mark.parametrize("d", [3, 4, 5, 7])
def test_roots_of_unity(d):
    w = roots_of_unity(d)
    assert np.allclose(w**d, 1.0, atol=1e-12)
    assert abs(w.sum()) < 1e-12
    assert abs(w[1] - omega(d)) < 1e-15


def test_tensor_is_kron():
    a = np.arange(4).reshape(2, 2)
    b = np.eye(2)
    assert np.array_equal(tensor(a, b), np.kron(a, b))


@pytest.mark.parametrize("d", [3, 4, 5])
def test_state_expansion_round_trip(d):
    rng = np.random.default_rng(d)
    state = make_state(d, rng.normal(size=d) + 1j * rng.normal(size=d))
    vec = state.vector
    idx = np.arange(d)
    recovered = vec[idx * d + idx]
    assert np.allclose(recovered, state.deltas, atol=1e-12)
    off = vec.copy()
    off[idx * d + idx] = 0
    assert np.abs(off).max() == 0.0


def test_make_state_normalizes():
    state = make_state(3, [2, 2, 2])
    assert np.allclose(state.deltas, np.ones(3) / np.sqrt(3))


def test_make_state_rejects_zero():
    with pytest.raises(DegenerateStateError):
        make_state(3, [0, 0, 0])


def test_entangled_state_requires_normalization():
    with pytest.raises(ValueError):
        EntangledState(3, np.array([1.0, 1.0, 1.0]))


def test_entangled_state_shape_check():
    with pytest.raises(DimensionMismatchError):
        EntangledState(3, np.array([1.0, 0.0]))


def test_projector_is_rank_one_density():
    state = maximally_entangled(3)
    rho = state.to_density()
    eigs = np.linalg.eigvalsh(rho.matrix)
    assert abs(eigs[-1] - 1.0) < 1e-12
    assert np.abs(eigs[:-1]).max() < 1e-12


def test_density_state_validation():
    with pytest.raises(ValueError):
        DensityState(2, np.eye(4) * 0.5)  # trace 2
    with pytest.raises(ValueError):
        DensityState(2, np.diag([1.5, -0.5, 0, 0]).astype(complex))  # negative eig
    m = np.eye(4, dtype=complex) / 4
    m[0, 1] = 0.1  # not Hermitian
    with pytest.raises(ValueError):
        DensityState(2, m)


def test_reference_states():
    assert np.allclose(psi3().deltas, np.ones(3) / np.sqrt(3))
    assert np.allclose(psi4().deltas, np.ones(4) / 2)
    expected = np.array([1, 1, 1, 1, -1j]) / np.sqrt(5)
    assert np.allclose(psi5().deltas, expected)
