#!/usr/bin/env python3
"""
Tests for the random-coding simulator: codebook generation, encoding,
transmission, joint-typicality decoding and error estimates.
"""

import numpy as np
import pytest

from channel import Family, InputFactorization, bsc_pair, identity_channel, uniform_factorization
from conftest import degenerate_general
from coding_sim import (DECODER_VARS, CodebookSet, SimConfig, SimReport, SimRow, TypicalityTest,
                        codebook_sizes, codebook_symbols, decode1, decoder_tests, encode, estimate_errors,
                        generate_codebooks, run_trial, transmit, trial_rng, typical_fraction,
                        wilson_interval)
from errors import ResourceError, UsageError, ValidationError
from prob_core import JointPmf, VarId


def make_config(ch=None, f=None, rates=(0, 0, 0, 0, 0), blocklengths=(8,), trials=10, **kwargs):
    return SimConfig(channel=ch or identity_channel(2), factorization=f or degenerate_general(),
                     rates=rates, blocklengths=blocklengths, trials=trials, **kwargs)


def cloud_factorization():
    """Receiver 1 sees X1 only; U2 is a uniform cloud independent of X1."""
    return InputFactorization.build(
        Family.GENERAL_EQ1,
        U0=[1.0], U1=[[1.0]], U2=[[0.5, 0.5]],
        X1=[[[0.5, 0.5]]], X2=[[[0.5, 0.5], [0.5, 0.5]]])


# Codebooks

def test_codebook_sizes():
    assert codebook_sizes((0.125, 0.0625, 0, 0, 0), 8) == (2, 1, 1, 1, 1)
    assert codebook_sizes((0.125, 0.0625, 0, 0, 0), 64) == (256, 16, 1, 1, 1)
    assert codebook_symbols((256, 16, 1, 1, 1), 64) == 573440


def test_zero_rates_give_single_codewords():
    cfg = make_config()
    cb = generate_codebooks(cfg, 8, np.random.default_rng(0))
    assert cb.sizes == (1, 1, 1, 1, 1)
    assert cb.u0.shape == (1, 8)
    assert cb.x1.shape == (1, 1, 1, 8)
    assert cb.x2.shape == (1, 1, 1, 8)


def test_point_mass_factors_give_constant_words():
    f = InputFactorization.build(
        Family.GENERAL_EQ1,
        U0=[0.0, 1.0], U1=[[1.0, 0.0], [0.0, 1.0]], U2=[[0.0, 1.0], [1.0, 0.0]],
        X1=np.tile([0.0, 1.0], (2, 2, 1)), X2=np.tile([1.0, 0.0], (2, 2, 1)))
    cfg = make_config(f=f, rates=(0.25, 0.25, 0.25, 0.25, 0.25))
    cb = generate_codebooks(cfg, 8, np.random.default_rng(1))
    assert cb.sizes == (4, 4, 4, 4, 4)
    assert np.all(cb.u0 == 1) and np.all(cb.u1 == 1) and np.all(cb.u2 == 0)
    assert np.all(cb.x1 == 1) and np.all(cb.x2 == 0)


def test_cloud_center_symbol_frequencies():
    f = InputFactorization.build(
        Family.GENERAL_EQ1,
        U0=[0.3, 0.7], U1=np.full((2, 2), 0.5), U2=np.full((2, 2), 0.5),
        X1=np.full((2, 2, 2), 0.5), X2=np.full((2, 2, 2), 0.5))
    cfg = make_config(f=f, rates=(0.5, 0, 0, 0, 0))
    cb = generate_codebooks(cfg, 20, np.random.default_rng(2))
    assert cb.u0.shape == (1024, 20)
    sigma = np.sqrt(0.21 / cb.u0.size)
    assert abs(cb.u0.mean() - 0.7) < 4 * sigma


def test_codebook_over_cap_is_resource_error():
    cfg = make_config(rates=(1.0, 0, 0, 0, 0), blocklengths=(8, 30))
    with pytest.raises(ResourceError, match="n=30"):
        estimate_errors(cfg)


# Encoding and transmission

def test_encode_looks_up_codewords():
    cfg = make_config(rates=(0.25, 0, 0.25, 0, 0.25))
    cb = generate_codebooks(cfg, 8, np.random.default_rng(3))
    x1, x2 = encode(cb, (3, 0, 2, 0, 1))
    np.testing.assert_array_equal(x1, cb.x1[3, 0, 2])
    np.testing.assert_array_equal(x2, cb.x2[3, 0, 1])
    with pytest.raises(UsageError, match="i=4"):
        encode(cb, (4, 0, 0, 0, 0))
    with pytest.raises(UsageError):
        encode(cb, (0, 0, 0))


def test_identity_transmission_is_exact():
    rng = np.random.default_rng(4)
    x1 = rng.integers(0, 2, 50)
    x2 = rng.integers(0, 2, 50)
    y1, y2 = transmit(identity_channel(2), x1, x2, rng)
    np.testing.assert_array_equal(y1, x1)
    np.testing.assert_array_equal(y2, x2)


def test_bsc_flip_frequency():
    rng = np.random.default_rng(5)
    x = np.zeros(20000, dtype=int)
    y1, y2 = transmit(bsc_pair(0.2), x, x, rng)
    sigma = np.sqrt(0.16 / x.size)
    assert abs(y1.mean() - 0.2) < 4 * sigma
    assert abs(y2.mean() - 0.2) < 4 * sigma


def test_transmit_length_mismatch():
    with pytest.raises(UsageError):
        transmit(identity_channel(2), np.zeros(4, int), np.zeros(5, int), np.random.default_rng(0))


# Typicality

def test_weak_and_strong_flavors_differ():
    p = JointPmf([VarId('A', 2)], [0.5, 0.5])
    weak = TypicalityTest(p, ['A'], 0.1, 'weak')
    strong = TypicalityTest(p, ['A'], 0.1, 'strong')
    balanced = np.array([[5, 5]])
    skewed = np.array([[9, 1]])
    assert weak.typical(balanced, 10)[0] and strong.typical(balanced, 10)[0]
    assert weak.typical(skewed, 10)[0]
    assert not strong.typical(skewed, 10)[0]


def test_zero_probability_cells_are_atypical():
    p = JointPmf([VarId('A', 2)], [1.0, 0.0])
    for flavor in ('weak', 'strong'):
        test = TypicalityTest(p, ['A'], 0.5, flavor)
        assert test.typical(np.array([[10, 0]]), 10)[0]
        assert not test.typical(np.array([[9, 1]]), 10)[0]


def test_counts_are_joint_types():
    p = JointPmf([VarId('A', 2), VarId('B', 3)], np.full((2, 3), 1 / 6))
    test = TypicalityTest(p, ['A', 'B'], 0.1)
    counts = test.counts([np.array([[0, 1, 1]]), np.array([[2, 0, 0]])])
    np.testing.assert_array_equal(counts, [[0, 0, 1, 2, 0, 0]])


# Decoding

def test_zero_rate_decoding_on_identity_channel():
    cfg = make_config(f=uniform_factorization(Family.GENERAL_EQ1, {'U0': 2, 'U1': 2, 'U2': 2, 'X1': 2, 'X2': 2}))
    tests = decoder_tests(cfg)
    for trial in range(5):
        assert run_trial(cfg, 8, trial_rng(0, 0, trial), tests) == (False, False)


def test_other_cloud_index_is_existential():
    """Every interfering cloud word is typical, yet the own message is decoded"""
    cfg = make_config(f=cloud_factorization(), rates=(0, 0, 0, 0.25, 0))
    test, _ = decoder_tests(cfg)
    word = np.array([0, 1, 0, 1, 1, 0, 0, 1])
    clouds = np.array([[[0, 0, 0, 0, 1, 1, 1, 1], [1, 1, 1, 1, 0, 0, 0, 0],
                        [0, 1, 1, 0, 0, 1, 1, 0], [1, 0, 0, 1, 1, 0, 0, 1]]])
    cb = CodebookSet(u0=np.zeros((1, 8), int), u1=np.zeros((1, 1, 8), int), x1=word.reshape(1, 1, 1, 8),
                     u2=clouds, x2=np.zeros((1, 4, 1, 8), int))
    assert test.is_typical([cb.u0[0], cb.u1[0, 0], word, clouds[0], word[None, :]]).all()
    assert decode1(cb, word, test) == (0, 0, 0)


def test_two_typical_candidates_is_an_error():
    cfg = make_config(f=cloud_factorization(), rates=(0, 0, 0.125, 0, 0))
    test, _ = decoder_tests(cfg)
    word = np.array([0, 1, 0, 1, 1, 0, 0, 1])
    cb = CodebookSet(u0=np.zeros((1, 8), int), u1=np.zeros((1, 1, 8), int),
                     x1=np.stack([word, word]).reshape(1, 1, 2, 8),
                     u2=np.zeros((1, 1, 8), int), x2=np.zeros((1, 1, 1, 8), int))
    assert decode1(cb, word, test) is None
    assert decode1(cb, word, test, chunk=8) is None


def test_exact_typicality_never_holds_on_noisy_channel():
    cfg = make_config(ch=bsc_pair(0.15), blocklengths=(16,))
    tests = decoder_tests(cfg, epsilon=0.0)
    for trial in range(20):
        assert run_trial(cfg, 16, trial_rng(0, 0, trial), tests) == (True, True)


def test_decoder_variable_lists():
    assert DECODER_VARS[1] == ('U0', 'U1', 'X1', 'U2', 'Y1')
    assert DECODER_VARS[2] == ('U0', 'U2', 'X2', 'U1', 'Y2')


# Error estimates

def test_identity_channel_decodes_reliably():
    cfg = make_config(rates=(0.125, 0, 0.125, 0, 0), blocklengths=(16,), trials=200, seed=11)
    report = estimate_errors(cfg)
    assert report.rows[0].pe_max <= 0.02


def test_zero_rates_on_noisy_channel_with_wide_epsilon():
    cfg = make_config(ch=bsc_pair(0.1), blocklengths=(64,), trials=50, epsilon=0.5)
    assert estimate_errors(cfg).rows[0].pe_max <= 0.05


def test_estimates_are_reproducible():
    cfg = make_config(ch=bsc_pair(0.05), rates=(0.125, 0, 0.125, 0, 0.125), blocklengths=(8, 16),
                      trials=30, seed=5)
    assert estimate_errors(cfg).to_csv() == estimate_errors(cfg).to_csv()


def test_report_columns():
    report = SimReport([SimRow(8, 100, 3, 5)])
    frame = report.to_frame()
    assert list(frame.columns) == ['n', 'trials', 'pe1', 'pe2', 'pe_max', 'ci_half_width']
    assert frame.loc[0, 'pe_max'] == pytest.approx(0.05)
    assert report.to_csv().splitlines()[0] == 'n,trials,pe1,pe2,pe_max,ci_half_width'
    assert report.max_errors == [0.05]


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi == pytest.approx(0.037, abs=1e-3)
    lo, hi = wilson_interval(50, 100)
    assert lo + hi == pytest.approx(1.0)
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_typical_fraction_grows_with_blocklength():
    assert typical_fraction(make_config(), 16, 20) == 1.0
    noisy = make_config(ch=bsc_pair(0.1))
    assert typical_fraction(noisy, 400, 100) > typical_fraction(noisy, 16, 100)


# Configuration checks

def test_sim_config_validation():
    with pytest.raises(ValidationError, match="R11"):
        make_config(rates=(0, 0, -0.1, 0, 0))
    with pytest.raises(ValidationError, match="epsilon"):
        make_config(epsilon=0.0)
    with pytest.raises(ValidationError, match="trials"):
        make_config(trials=0)
    with pytest.raises(ValidationError, match="typicality"):
        make_config(typicality='robust')
    with pytest.raises(ValidationError, match="Unknown rate names"):
        make_config(rates={'R3': 0.1})
    with pytest.raises(ValidationError, match="Blocklengths"):
        make_config(blocklengths=())


def test_sim_config_accepts_named_rates():
    cfg = make_config(rates={'R0': 0.25, 'R22': 0.125})
    assert cfg.rates == (0.25, 0.0, 0.0, 0.0, 0.125)
    assert cfg.factorization.family is Family.GENERAL_EQ1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
