#!/usr/bin/env python3
"""
Shared fixtures for the icckit tests.
"""

import numpy as np
import pytest

from channel import (ChannelSpec, Family, InputFactorization, identity_channel, lift_deterministic,
                     random_channel, random_factorization, uniform_factorization, xor_deterministic)
from config import ENV_VARS, set_config


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch, tmp_path):
    """Every test starts from defaults: no ICCKIT_* variables, no config file, no cached config."""
    for env_name in list(ENV_VARS.values()) + ['ICCKIT_CONFIG']:
        monkeypatch.delenv(env_name, raising=False)
    monkeypatch.chdir(tmp_path)
    set_config(None)
    yield
    set_config(None)


BINARY_CARDS = {'U0': 2, 'U1': 2, 'U2': 2, 'X1': 2, 'X2': 2}


def degenerate_general(x_card=2) -> InputFactorization:
    """Auxiliaries with one symbol each and independent uniform inputs."""
    return uniform_factorization(Family.GENERAL_EQ1, {'U0': 1, 'U1': 1, 'U2': 1, 'X1': x_card, 'X2': x_card})


def random_general(rng, cards=None) -> InputFactorization:
    return random_factorization(Family.GENERAL_EQ1, cards or BINARY_CARDS, rng)


def random_binary_channel(rng) -> ChannelSpec:
    return random_channel(rng, 2, 2, 2, 2)


def aicc_fixture():
    """AICC distribution on a channel where Y1 sees only X2, so I(X1;Y1) = 0."""
    f = InputFactorization.build(
        Family.AICC_EQ51,
        X1=[0.5, 0.5],
        U2=[[0.5, 0.5], [0.5, 0.5]],
        X2=[[[0.8, 0.2], [0.3, 0.7]], [[0.8, 0.2], [0.3, 0.7]]])
    bsc = np.array([[0.9, 0.1], [0.1, 0.9]])
    kernel = np.zeros((2, 2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            kernel[x1, x2, :, x1 ^ x2] = bsc[x2]
    return f, ChannelSpec(kernel)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def identity():
    return identity_channel(2)


@pytest.fixture
def xor():
    return xor_deterministic(1)


@pytest.fixture
def xor_channel(xor):
    return lift_deterministic(xor)
