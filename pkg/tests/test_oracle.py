import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import spin_configs
from fgpauli.errors import ValidationError
from fgpauli.gaussian import MIXED, GaussianSpec, normalization, random_spec
from fgpauli.oracle import (build_gaussian, correlation_oracle, element_oracle, jw_operators,
                            local_rotation, rotation)


def test_single_mode_annihilator():
    (c,) = jw_operators(1)
    assert np.array_equal(c, np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("L", [2, 6])
def test_car_exact(L):
    c = jw_operators(L)
    I = np.eye(2**L, dtype=np.int64)
    for i in range(L):
        for j in range(L):
            assert not np.any(c[i] @ c[j].T + c[j].T @ c[i] - (I if i == j else 0))
            assert not np.any(c[i] @ c[j] + c[j] @ c[i])


def test_guards():
    with pytest.raises(ValidationError):
        jw_operators(11)
    with pytest.raises(ValidationError):
        build_gaussian(GaussianSpec(9, np.zeros((18, 18))))


def test_build_gaussian_examples():
    assert np.allclose(build_gaussian(GaussianSpec(2, np.zeros((4, 4)))), np.eye(4))
    a = 0.3
    G = build_gaussian(GaussianSpec.particle_conserving(np.array([[a]])))
    assert np.allclose(G, np.diag([1, np.exp(a)]))


def test_local_rotation_examples():
    assert np.allclose(local_rotation(0, 0, 0), np.array([[1, 0], [0, -1]]))
    assert np.allclose(local_rotation(0, np.pi / 2, 0), np.array([[1, 1], [1, -1]]) / np.sqrt(2))


@given(st.lists(st.tuples(*[st.floats(-7, 7)] * 3), min_size=1, max_size=4))
def test_rotation_unitary(angles):
    U = rotation(angles)
    assert np.allclose(U @ U.conj().T, np.eye(U.shape[0]), atol=1e-12)


def test_oracle_identity_any_basis():
    spec = GaussianSpec(2, np.zeros((4, 4)))
    angles = ((0.3, 1.1, -0.4), (2.0, 0.2, 0.9))
    for bra, ket in spin_configs(2):
        v = element_oracle(spec, angles, bra, ket)
        assert abs(v - (bra == ket)) < 1e-12


def test_oracle_x_basis_single_mode():
    a = 0.7
    spec = GaussianSpec.particle_conserving(np.array([[a]]))
    x = ((0.0, np.pi / 2, 0.0),)
    assert element_oracle(spec, x, (1,), (1,)) == pytest.approx((1 + np.exp(a)) / 2)
    assert element_oracle(spec, x, (-1,), (-1,)) == pytest.approx((1 + np.exp(a)) / 2)
    # the rotation maps |+> to (|up> + |down>)/sqrt2 and |-> to (|up> - |down>)/sqrt2
    assert element_oracle(spec, x, (1,), (-1,)) == pytest.approx((np.exp(a) - 1) / 2)


def test_correlation_oracle():
    assert np.allclose(correlation_oracle(GaussianSpec(2, np.zeros((4, 4)), MIXED)), 0)
    a = 0.7
    G = correlation_oracle(GaussianSpec(1, np.array([[a, 0], [0, -a]]), MIXED))
    assert G[0, 0] == pytest.approx(np.tanh(a / 2))
    with pytest.raises(ValidationError):
        correlation_oracle(random_spec(1, rng=0))


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_mixed_dense_hermitian_and_trace(L):
    spec = random_spec(L, MIXED, rng=20 + L)
    Z = normalization(spec)
    rho = build_gaussian(spec) / Z
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-10
    assert abs(np.trace(rho) - 1) < 1e-10
