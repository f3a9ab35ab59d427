#!/usr/bin/env python3
"""
Tests for channel kernels, input factorization families and the
deterministic channel class.
"""

import numpy as np
import pytest

from channel import (ChannelSpec, DeterministicSpec, Family, InputFactorization, as_general, bsc_pair,
                     check_strong_interference, identity_channel, induce_joint, lift_deterministic,
                     marginal_channels, pairing_deterministic, random_channel, random_factorization,
                     strong_interference_sweep, swap_channel, uniform_factorization, xor_deterministic)
from conftest import random_binary_channel, random_general
from errors import UsageError, ValidationError
from prob_core import conditional_entropy, entropy, marginalize
from regions import dicc_joint


def test_kernel_row_error_names_flat_index():
    kernel = identity_channel(2).kernel.copy()
    kernel[1, 1, 1, 1] = 0.9
    with pytest.raises(ValidationError, match=r"row 3 \(x1=1, x2=1\)"):
        ChannelSpec(kernel)


def test_from_flat_size_mismatch():
    with pytest.raises(ValidationError, match="entries"):
        ChannelSpec.from_flat({'X1': 2, 'X2': 2, 'Y1': 2, 'Y2': 2}, [1.0] * 15)
    with pytest.raises(ValidationError, match="missing Y2"):
        ChannelSpec.from_flat({'X1': 2, 'X2': 2, 'Y1': 2}, [1.0] * 8)


def test_marginal_channels_of_bsc_pair():
    p1, p2 = marginal_channels(bsc_pair(0.1))
    np.testing.assert_allclose(p1[0, 1], [0.9, 0.1])
    np.testing.assert_allclose(p2[0, 1], [0.1, 0.9])


def test_swapped_channel_exchanges_users(rng):
    ch = random_binary_channel(rng)
    sw = ch.swapped()
    assert sw.kernel[0, 1, 1, 0] == ch.kernel[1, 0, 0, 1]
    np.testing.assert_array_equal(sw.swapped().kernel, ch.kernel)


def test_xor_lift_is_zero_one_kernel(xor):
    ch = lift_deterministic(xor)
    for x1 in range(2):
        for x2 in range(2):
            assert ch.kernel[x1, x2, x1 ^ x2, x1 ^ x2] == 1.0
    assert xor.h1(1, 1) == 0
    assert xor.h2(1, 0) == 1


def test_marginal_channels_are_stochastic(rng):
    for shape in ((2, 2, 2, 2), (3, 2, 4, 2), (2, 3, 2, 3)):
        p1, p2 = marginal_channels(random_channel(rng, *shape))
        assert p1.shape == shape[:3]
        assert p2.shape == shape[:2] + shape[3:]
        np.testing.assert_allclose(p1.sum(axis=2), np.ones(shape[:2]), atol=1e-12)
        np.testing.assert_allclose(p2.sum(axis=2), np.ones(shape[:2]), atol=1e-12)


def test_pairing_lift_delivers_both_symbols():
    d = pairing_deterministic(2)
    ch = lift_deterministic(d)
    assert ch.alphabets == {'X1': 2, 'X2': 2, 'Y1': 4, 'Y2': 4}
    for x1 in range(2):
        for x2 in range(2):
            assert ch.kernel[x1, x2, 2 * x1 + x2, 2 * x2 + x1] == 1.0
            assert d.h1(2 * x1 + x2, x1) == x2
            assert d.h2(2 * x2 + x1, x2) == x1
    assert ch.kernel.sum() == 4.0


@pytest.mark.parametrize('d', [xor_deterministic(1), pairing_deterministic(2), pairing_deterministic(3)],
                         ids=['xor', 'pairing2', 'pairing3'])
def test_deterministic_outputs_and_interference_are_recoverable(d, rng):
    """Y1 is a function of (X1, V2) and V2 a function of (Y1, X1); likewise at receiver 2"""
    for _ in range(5):
        f = random_factorization(Family.DICC_EQ59, {'V0': 2, 'X1': d.x1_card, 'X2': d.x2_card}, rng)
        p = dicc_joint(d, f)
        assert conditional_entropy(p, 'Y1', ['X1', 'V2']) == pytest.approx(0.0, abs=1e-12)
        assert conditional_entropy(p, 'V2', ['Y1', 'X1']) == pytest.approx(0.0, abs=1e-12)
        assert conditional_entropy(p, 'Y2', ['X2', 'V1']) == pytest.approx(0.0, abs=1e-12)
        assert conditional_entropy(p, 'V1', ['Y2', 'X2']) == pytest.approx(0.0, abs=1e-12)
        assert entropy(p, ['Y1', 'X1']) == pytest.approx(entropy(p, ['X1', 'V2']), abs=1e-12)


def test_unrecoverable_deterministic_channel_names_pair():
    d = DeterministicSpec(k1=[0, 1], k2=[0, 1], o1=[[0, 0], [0, 1]], o2=[[0, 1], [1, 0]])
    with pytest.raises(ValidationError, match=r"\(x1=0, v2=0\) and \(x1=0, v2=1\)"):
        lift_deterministic(d)


def test_deterministic_shape_checks():
    with pytest.raises(ValidationError, match="o1 must be indexed"):
        DeterministicSpec(k1=[0, 1], k2=[0, 1], o1=[[0, 1]], o2=[[0, 1], [1, 0]])


def test_factorization_missing_factor():
    with pytest.raises(ValidationError, match="missing \\['X2'\\]"):
        InputFactorization.build(Family.SICC_EQ_PS, U0=[1.0], X1=[[0.5, 0.5]])


def test_factorization_parent_shape_mismatch():
    with pytest.raises(ValidationError, match="axis U0"):
        InputFactorization.build(Family.SICC_EQ_PS, U0=[0.5, 0.5], X1=[[0.5, 0.5]], X2=[[1.0], [1.0]])


def test_factorization_row_normalization():
    with pytest.raises(ValidationError, match="sums to"):
        InputFactorization.build(Family.SICC_EQ_PS, U0=[1.0], X1=[[0.5, 0.4]], X2=[[1.0]])


def test_induce_joint_alphabet_mismatch(identity):
    f = uniform_factorization(Family.SICC_EQ_PS, {'U0': 1, 'X1': 3, 'X2': 2})
    with pytest.raises(ValidationError, match="Alphabet mismatch: X1"):
        induce_joint(f, identity)


def test_induced_joint_has_channel_outputs(identity):
    f = uniform_factorization(Family.SICC_EQ_PS, {'U0': 1, 'X1': 2, 'X2': 2})
    p = induce_joint(f, identity)
    assert p.names == ('U0', 'X1', 'X2', 'Y1', 'Y2')
    assert conditional_entropy(p, 'Y1', 'X1') == pytest.approx(0.0, abs=1e-12)


def test_sicc_embedding_copies_inputs(rng):
    f = random_factorization(Family.SICC_EQ_PS, {'U0': 2, 'X1': 2, 'X2': 3}, rng)
    g = as_general(f)
    assert g.family is Family.GENERAL_EQ1
    p = g.joint()
    assert conditional_entropy(p, 'X1', 'U1') == pytest.approx(0.0, abs=1e-12)
    assert conditional_entropy(p, 'X2', 'U2') == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(marginalize(p, ['U0', 'X1', 'X2']).mass, f.joint().mass, atol=1e-12)


def test_timeshare_embedding_renames_q(rng):
    cards = {'Q': 2, 'U1': 2, 'U2': 3, 'X1': 2, 'X2': 2}
    f = random_factorization(Family.TIMESHARE_EQ34, cards, rng)
    g = as_general(f)
    np.testing.assert_allclose(g.joint().mass, f.joint().mass)


def test_aicc_embedding_collapses_u0_u1_onto_x1(rng):
    f = random_factorization(Family.AICC_EQ51, {'X1': 2, 'U2': 2, 'X2': 2}, rng)
    p = as_general(f).joint()
    assert conditional_entropy(p, 'U0', 'X1') == pytest.approx(0.0, abs=1e-12)
    assert conditional_entropy(p, 'U1', 'X1') == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(marginalize(p, ['X1', 'U2', 'X2']).permute(['X1', 'U2', 'X2']).mass,
                               f.joint().mass, atol=1e-12)


def test_dicc_embedding_follows_interference_maps(rng):
    d = xor_deterministic(2)
    f = random_factorization(Family.DICC_EQ59, {'V0': 2, 'X1': 4, 'X2': 4}, rng)
    g = as_general(f, d)
    p = g.joint()
    assert conditional_entropy(p, 'U1', 'X1') == pytest.approx(0.0, abs=1e-12)
    assert conditional_entropy(p, 'U2', 'X2') == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(marginalize(p, ['U0', 'X1', 'X2']).mass, f.joint().mass, atol=1e-12)
    with pytest.raises(UsageError):
        as_general(f)


def test_general_swap_round_trip(rng):
    f = random_general(rng)
    back = f.swapped().swapped()
    for name in f.tables:
        np.testing.assert_array_equal(back.tables[name], f.tables[name])


def test_strong_interference_on_swap_channel(rng):
    f = random_factorization(Family.SICC_EQ_PS, {'U0': 2, 'X1': 2, 'X2': 2}, rng)
    holds, slacks = check_strong_interference(swap_channel(), f)
    assert holds
    assert min(slacks) >= -1e-12


def test_strong_interference_fails_without_interference(identity, rng):
    f = random_factorization(Family.SICC_EQ_PS, {'U0': 2, 'X1': 2, 'X2': 2}, rng)
    holds, (slack_1, _) = check_strong_interference(identity, f)
    assert not holds
    assert slack_1 < 0


def test_strong_interference_needs_sicc_family(identity):
    with pytest.raises(UsageError):
        check_strong_interference(identity, uniform_factorization(Family.GENERAL_EQ1,
                                                                  {'U0': 1, 'U1': 1, 'U2': 1, 'X1': 2, 'X2': 2}))


def test_sweep_verdicts(identity):
    report = strong_interference_sweep(swap_channel(), samples=20, grid_step=0.5, seed=1)
    assert report.holds
    assert report.checked == 3 ** 5 + 20
    failing = strong_interference_sweep(identity, samples=5, grid_step=0.5, seed=1)
    assert not failing.holds
    assert failing.worst is not None
    assert "fails" in failing.summary()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
