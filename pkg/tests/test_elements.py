import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import spin_configs
from fgpauli.elements import (BASIS_ANGLES, OccupationSets, SpinConfiguration,
                              diagonal_probability, element_computational,
                              element_computational_spins, element_particle_conserving,
                              element_pauli, element_sigma_z, generating_function,
                              generating_function_sum, homogeneous_angles, kernel_pauli,
                              kernel_sigma_z, kernel_special, special_angles)
from fgpauli.errors import ValidationError
from fgpauli.gaussian import (CONSERVING, MIXED, GaussianSpec, decompose, normalization,
                              random_spec)
from fgpauli.oracle import build_gaussian, correlation_oracle, element_oracle, rotated_operator
from fgpauli.oracle import spins_to_index
from fgpauli.signs import canonical_pair

ZERO1 = GaussianSpec(1, np.zeros((2, 2)))


def _subsets(L):
    for r in range(L + 1):
        yield from itertools.combinations(range(1, L + 1), r)


def test_occupation_sets():
    occ = OccupationSets(3, (3, 1), ())
    assert occ.I1 == (1, 3) and occ.I0 == (2,) and occ.J0 == (1, 2, 3)
    assert OccupationSets.from_spins((1, -1), (-1, 1)) == OccupationSets(2, (2,), (1,))
    with pytest.raises(ValidationError):
        OccupationSets(2, (1, 1), ())
    with pytest.raises(ValidationError):
        OccupationSets(2, (3,), ())


def test_spin_configuration_validation():
    with pytest.raises(ValidationError):
        SpinConfiguration((1, 0), (1, 1))
    with pytest.raises(ValidationError):
        SpinConfiguration((1,), (1, 1))
    with pytest.raises(ValidationError):
        SpinConfiguration((1,), (1,), ((0, 0, 0),) * 3)
    with pytest.raises(ValidationError):
        SpinConfiguration((1,), (1,), ((np.nan, 0, 0),))
    cfg = SpinConfiguration((1, -1), (-1, -1), ((1, 2, 3), (4, 5, 6)))
    assert cfg.index_angles.shape == (4, 3) and cfg.index_angles[2, 0] == 1


def test_computational_trivial():
    bd = decompose(ZERO1)
    assert element_computational(bd, OccupationSets(1, (1,), (1,))) == 1
    assert element_computational(bd, OccupationSets(1, (1,), ())) == 0


@pytest.mark.parametrize("kind", ["generic", MIXED, CONSERVING])
def test_computational_matches_oracle(kind):
    L = 3
    spec = random_spec(L, kind, rng=7)
    bd = decompose(spec)
    G = build_gaussian(spec)
    for I1 in _subsets(L):
        for J1 in _subsets(L):
            occ = OccupationSets(L, I1, J1)
            col = sum(1 << (i - 1) for i in I1)
            row = sum(1 << (j - 1) for j in J1)
            assert abs(element_computational(bd, occ) - G[row, col]) < 1e-9


def test_particle_conserving_examples():
    L = 2
    for I1 in _subsets(L):
        for J1 in _subsets(L):
            v = element_particle_conserving(np.zeros((L, L)), OccupationSets(L, I1, J1))
            assert v == (1 if I1 == J1 else 0)
    a = 0.4 + 0.1j
    v = element_particle_conserving(np.array([[a]]), OccupationSets(1, (1,), (1,)))
    assert v == pytest.approx(np.exp(a))


def test_particle_conserving_cross_formula():
    L = 3
    spec = random_spec(L, CONSERVING, rng=3)
    bd = decompose(spec)
    G = build_gaussian(spec)
    for I1 in _subsets(L):
        for J1 in _subsets(L):
            occ = OccupationSets(L, I1, J1)
            det = element_particle_conserving(spec.A_small, occ)
            if len(I1) != len(J1):
                assert det == 0
            row = sum(1 << (j - 1) for j in J1)
            col = sum(1 << (i - 1) for i in I1)
            assert abs(det - G[row, col]) < 1e-9
            assert abs(det - element_computational(bd, occ)) < 1e-9


def test_particle_conserving_shape_error():
    with pytest.raises(ValidationError):
        element_particle_conserving(np.zeros((2, 2)), OccupationSets(3, (), ()))


def test_sigma_z_trivial():
    bd, pair = decompose(ZERO1), canonical_pair(1)
    assert element_sigma_z(bd, pair, (1,), (1,)) == 1
    assert element_sigma_z(bd, pair, (1,), (-1,)) == 0


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_sigma_z_equals_computational(L):
    bd, pair = decompose(random_spec(L, rng=L)), canonical_pair(L)
    for bra, ket in spin_configs(L):
        a = element_sigma_z(bd, pair, bra, ket)
        b = element_computational_spins(bd, bra, ket)
        assert abs(a - b) <= 1e-12 * max(1, abs(b))


def test_pauli_zero_angles_reduces_to_sigma_z():
    L = 3
    bd, pair = decompose(random_spec(L, rng=2)), canonical_pair(L)
    for bra, ket in spin_configs(L):
        a = element_pauli(bd, pair, SpinConfiguration(bra, ket))
        b = element_sigma_z(bd, pair, bra, ket)
        assert abs(a - b) <= 1e-12 * max(1, abs(b))


def test_pauli_x_basis_identity():
    bd, pair = decompose(ZERO1), canonical_pair(1)
    x = (BASIS_ANGLES["x"],)
    assert element_pauli(bd, pair, SpinConfiguration((1,), (1,), x)) == pytest.approx(1)
    assert abs(element_pauli(bd, pair, SpinConfiguration((1,), (-1,), x))) < 1e-15


@given(st.integers(1, 3), st.integers(0, 10**6), st.booleans())
def test_pauli_matches_rotated_oracle(L, seed, split):
    rng = np.random.default_rng(seed)
    spec = random_spec(L, rng=rng)
    n = 2 * L if split else L
    angles = tuple(tuple(rng.uniform(-np.pi, 2 * np.pi, 3)) for _ in range(n))
    bd, pair = decompose(spec), canonical_pair(L)
    R = rotated_operator(spec, angles)
    for bra, ket in spin_configs(L):
        v = element_pauli(bd, pair, SpinConfiguration(bra, ket, angles))
        assert abs(v - R[spins_to_index(bra), spins_to_index(ket)]) < 1e-9


def test_pauli_z_like_parity_zero_is_exact():
    L = 2
    bd, pair = decompose(random_spec(L, rng=4)), canonical_pair(L)
    angles = ((0.3, np.pi, 1.2), (0.0, 0.0, -0.5))
    for bra, ket in spin_configs(L):
        flips = [(-s if a[1] == np.pi else s) for s, a in zip(bra + ket, angles * 2)]
        v = element_pauli(bd, pair, SpinConfiguration(bra, ket, angles))
        if flips.count(-1) % 2:
            assert v == 0
        else:
            assert abs(v - element_oracle(random_spec(L, rng=4), angles, bra, ket)) < 1e-9


@pytest.mark.parametrize("mu,nu", list(itertools.product("xyz", repeat=2)))
def test_kernel_special_rows(mu, nu):
    L = 2
    bd, pair = decompose(random_spec(L, rng=12)), canonical_pair(L)
    for bra, ket in spin_configs(L):
        K = kernel_special((mu, nu), bd, pair, bra, ket)
        ref = kernel_pauli(bd, pair, SpinConfiguration(bra, ket, special_angles((mu, nu), L)))
        assert np.max(np.abs(K - ref)) < 1e-14
        if (mu, nu) == ("z", "z"):
            assert np.array_equal(K, kernel_sigma_z(bd, pair, bra + ket))


def test_kernel_special_xy_entry():
    L = 1
    bd, pair = decompose(random_spec(L, rng=1)), canonical_pair(L)
    for bra, ket in spin_configs(L):
        K = kernel_special(("x", "y"), bd, pair, bra, ket)
        SA = pair.sigma[0, 1] * bd.kernelA[0, 1]
        # bra index in x, ket index in y: the ket-side phase conjugates i
        expected = 0.5 * (-1j * SA + bra[0] * ket[0] * pair.sigma_prime[0, 1])
        assert K[0, 1] == pytest.approx(expected)


def test_kernel_special_bad_label():
    with pytest.raises(ValidationError):
        kernel_special(("x", "w"), decompose(ZERO1), canonical_pair(1), (1,), (1,))


def test_homogeneous_angles():
    assert homogeneous_angles(2, "y") == (BASIS_ANGLES["y"],) * 2


def test_generating_function_trivial():
    L = 2
    bd, pair = decompose(random_spec(L, rng=3)), canonical_pair(L)
    full = element_computational_spins(bd, (1,) * L, (1,) * L)
    assert generating_function(bd, pair, np.zeros(2 * L)) == pytest.approx(full)
    t, u = 0.3 - 0.2j, 1.7
    g = generating_function(decompose(ZERO1), canonical_pair(1), [t, u])
    assert g == pytest.approx(1 + t * u * canonical_pair(1).sigma_prime[0, 1])


@pytest.mark.parametrize("L", [1, 2, 3])
def test_generating_function_matches_sum(L):
    rng = np.random.default_rng(L)
    bd, pair = decompose(random_spec(L, rng=rng)), canonical_pair(L)
    for _ in range(5):
        lam = rng.normal(size=2 * L) + 1j * rng.normal(size=2 * L)
        ref = generating_function_sum(bd, lam)
        assert abs(generating_function(bd, pair, lam) - ref) <= 1e-9 * max(1, abs(ref))


def test_generating_function_reproduces_theta_elements():
    L = 2
    rng = np.random.default_rng(5)
    bd, pair = decompose(random_spec(L, rng=rng)), canonical_pair(L)
    theta = rng.uniform(0.2, 2.8, L)
    angles = tuple((0.0, t, 0.0) for t in theta)
    th = np.r_[theta, theta]
    for bra, ket in spin_configs(L):
        s = np.array(bra + ket)
        lam = np.where(s == 1, np.tan(th / 2), -1 / np.tan(th / 2))
        trig = np.prod(np.where(s == 1, np.cos(th / 2), np.sin(th / 2)))
        v = element_pauli(bd, pair, SpinConfiguration(bra, ket, angles))
        assert abs(trig * generating_function(bd, pair, lam) - v) < 1e-10


def test_generating_function_length_error():
    with pytest.raises(ValidationError):
        generating_function(decompose(ZERO1), canonical_pair(1), [1.0])


def test_diagonal_probability_examples():
    for L in (1, 3):
        for cfg in itertools.product((1, -1), repeat=L):
            assert diagonal_probability(np.zeros((L, L)), cfg) == pytest.approx(2.0**-L)
            # G = I is the fully occupied state
            expected = 1.0 if all(c == 1 for c in cfg) else 0.0
            assert diagonal_probability(np.eye(L), cfg) == pytest.approx(expected)
    with pytest.raises(ValidationError):
        diagonal_probability(np.zeros((2, 2)), (1, 0))


@pytest.mark.parametrize("L", [2, 4])
def test_diagonal_probability_matches_oracle(L):
    spec = random_spec(L, MIXED, rng=L, real=True)
    G = correlation_oracle(spec).real
    rho = build_gaussian(spec) / normalization(spec)
    total = 0.0
    for cfg in itertools.product((1, -1), repeat=L):
        p = diagonal_probability(G, cfg)
        total += p
        assert abs(p - rho[spins_to_index(cfg), spins_to_index(cfg)].real) < 1e-9
    assert total == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("basis", ["z", "x", "y", "random"])
def test_mixed_table_hermitian_and_trace(basis):
    L = 2
    rng = np.random.default_rng(31)
    spec = random_spec(L, MIXED, rng=rng)
    if basis == "random":
        angles = tuple(tuple(rng.uniform(0, 2 * np.pi, 3)) for _ in range(L))
    else:
        angles = homogeneous_angles(L, basis)
    bd, pair = decompose(spec), canonical_pair(L)
    T = np.array([[element_pauli(bd, pair, SpinConfiguration(b, k, angles))
                   for k in itertools.product((1, -1), repeat=L)]
                  for b in itertools.product((1, -1), repeat=L)])
    assert np.max(np.abs(T - T.conj().T)) < 1e-9
    assert abs(np.trace(T) - normalization(spec)) < 1e-8
