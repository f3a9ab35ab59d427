#!/usr/bin/env python3
"""
Coding Simulation Module for icckit

Monte Carlo run of the cascaded superposition code: random codebooks
drawn from the input factorization, memoryless transmission, and
simultaneous joint-typicality decoding at both receivers. A fresh
codebook is drawn for every trial so the error estimates are averages
over the random-coding ensemble.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import sqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from channel import ChannelSpec, DeterministicSpec, Family, InputFactorization, as_general, induce_joint
from config import TYPICALITY_FLAVORS, get_config
from errors import ResourceError, UsageError, ValidationError
from prob_core import JointPmf, entropy, marginalize

RATE_NAMES = ('R0', 'R12', 'R11', 'R21', 'R22')

# variables each receiver tests for joint typicality, own layers first
DECODER_VARS = {
    1: ('U0', 'U1', 'X1', 'U2', 'Y1'),
    2: ('U0', 'U2', 'X2', 'U1', 'Y2'),
}

Z_95 = 1.959963984540054


@dataclass(frozen=True, eq=False)
class SimConfig:
    """
    One simulation campaign.

    The factorization may be any family that embeds into GENERAL_EQ1
    (DICC_EQ59 also needs `deterministic`); it is stored embedded.
    """
    channel: ChannelSpec
    factorization: InputFactorization
    rates: Tuple[float, ...]
    blocklengths: Tuple[int, ...]
    trials: int
    epsilon: float = 0.1
    seed: int = 0
    typicality: str = 'weak'
    deterministic: Optional[DeterministicSpec] = None

    def __post_init__(self):
        rates = self.rates
        if isinstance(rates, dict):
            unknown = sorted(set(rates) - set(RATE_NAMES))
            if unknown:
                raise ValidationError(f"Unknown rate names {unknown}; expected {list(RATE_NAMES)}")
            rates = tuple(float(rates.get(name, 0.0)) for name in RATE_NAMES)
        rates = tuple(float(r) for r in rates)
        if len(rates) != len(RATE_NAMES):
            raise ValidationError(f"Need {len(RATE_NAMES)} rates {list(RATE_NAMES)}, got {len(rates)}")
        for name, r in zip(RATE_NAMES, rates):
            if not np.isfinite(r) or r < 0:
                raise ValidationError(f"Rate {name} = {r} must be a finite nonnegative number")
        blocklengths = tuple(int(n) for n in self.blocklengths)
        if not blocklengths or min(blocklengths) < 1:
            raise ValidationError(f"Blocklengths must be positive integers, got {list(self.blocklengths)}")
        if int(self.trials) < 1:
            raise ValidationError(f"trials must be at least 1, got {self.trials}")
        if not self.epsilon > 0:
            raise ValidationError(f"epsilon must be positive, got {self.epsilon}")
        if self.typicality not in TYPICALITY_FLAVORS:
            raise ValidationError(f"typicality must be one of {', '.join(TYPICALITY_FLAVORS)}")

        general = as_general(self.factorization, self.deterministic)
        induce_joint(general, self.channel)
        object.__setattr__(self, 'factorization', general)
        object.__setattr__(self, 'rates', rates)
        object.__setattr__(self, 'blocklengths', blocklengths)
        object.__setattr__(self, 'trials', int(self.trials))
        object.__setattr__(self, 'epsilon', float(self.epsilon))
        object.__setattr__(self, 'seed', int(self.seed))

    @property
    def joint(self) -> JointPmf:
        return induce_joint(self.factorization, self.channel)


def codebook_sizes(rates: Sequence[float], n: int) -> Tuple[int, ...]:
    """floor(2^(nR)) per layer, at least 1."""
    return tuple(max(1, int(np.floor(2.0 ** (n * r) + 1e-9))) for r in rates)


def codebook_symbols(sizes: Sequence[int], n: int) -> int:
    m0, m12, m11, m21, m22 = (int(s) for s in sizes)
    return n * (m0 + m0 * m12 + m0 * m12 * m11 + m0 * m21 + m0 * m21 * m22)


def check_resources(cfg: SimConfig, n: int, cap: Optional[int] = None):
    """
    Raises:
        ResourceError: if the codebook for blocklength n exceeds the symbol cap
    """
    cap = get_config().codebook_cap if cap is None else cap
    sizes = codebook_sizes(cfg.rates, n)
    total = codebook_symbols(sizes, n)
    if total > cap:
        raise ResourceError(
            f"Codebook at n={n} needs {total} symbols (sizes {sizes}), cap is {cap}")


@dataclass(eq=False)
class CodebookSet:
    """Codewords indexed [i, j, k] for sender 1 and [i, l, m] for sender 2; symbols on the last axis."""
    u0: np.ndarray  # (M0, n)
    u1: np.ndarray  # (M0, M12, n)
    x1: np.ndarray  # (M0, M12, M11, n)
    u2: np.ndarray  # (M0, M21, n)
    x2: np.ndarray  # (M0, M21, M22, n)

    @property
    def n(self) -> int:
        return self.u0.shape[-1]

    @property
    def sizes(self) -> Tuple[int, int, int, int, int]:
        return (self.u0.shape[0], self.u1.shape[1], self.x1.shape[2], self.u2.shape[1], self.x2.shape[2])


def _draw(rng: np.random.Generator, table: np.ndarray, parents: Sequence[np.ndarray], shape) -> np.ndarray:
    """Sample child symbols i.i.d. from table[parents..., :] by inverse CDF."""
    cdf = np.cumsum(table, axis=-1)
    rows = cdf[tuple(np.broadcast_to(p, shape) for p in parents)] if parents else np.broadcast_to(cdf, shape + cdf.shape)
    u = rng.random(shape)
    symbols = (u[..., None] >= rows).sum(axis=-1)
    return np.minimum(symbols, table.shape[-1] - 1)


def _draw_words(f: InputFactorization, sizes: Sequence[int], n: int, rng: np.random.Generator) -> CodebookSet:
    m0, m12, m11, m21, m22 = sizes
    t = f.tables
    u0 = _draw(rng, t['U0'], (), (m0, n))
    u1 = _draw(rng, t['U1'], (u0[:, None, :],), (m0, m12, n))
    x1 = _draw(rng, t['X1'], (u0[:, None, None, :], u1[:, :, None, :]), (m0, m12, m11, n))
    u2 = _draw(rng, t['U2'], (u0[:, None, :],), (m0, m21, n))
    x2 = _draw(rng, t['X2'], (u0[:, None, None, :], u2[:, :, None, :]), (m0, m21, m22, n))
    return CodebookSet(u0, u1, x1, u2, x2)


def generate_codebooks(cfg: SimConfig, n: int, rng: np.random.Generator) -> CodebookSet:
    """
    Draw every layer of the superposition codebook.

    Layers are drawn in the order u0, u1, x1, u2, x2; each symbol is
    independent given the symbols of its parent codewords at the same
    position.
    """
    check_resources(cfg, n)
    return _draw_words(cfg.factorization, codebook_sizes(cfg.rates, n), n, rng)


def encode(cb: CodebookSet, message: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """Look up (x1(i, j, k), x2(i, l, m)) for the zero-based message (i, j, k, l, m)."""
    if len(message) != 5:
        raise UsageError(f"Message must have 5 indices (i, j, k, l, m), got {len(message)}")
    for name, index, size in zip('ijklm', message, cb.sizes):
        if not 0 <= int(index) < size:
            raise UsageError(f"Message index {name}={index} outside 0..{size - 1}")
    i, j, k, l, m = (int(v) for v in message)
    return cb.x1[i, j, k], cb.x2[i, l, m]


def transmit(ch: ChannelSpec, x1: np.ndarray, x2: np.ndarray,
             rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Pass both input sequences through the memoryless channel."""
    x1 = np.asarray(x1, dtype=int)
    x2 = np.asarray(x2, dtype=int)
    if x1.shape != x2.shape:
        raise UsageError(f"Input sequences differ in length: {x1.shape} vs {x2.shape}")
    rows = ch.kernel[x1, x2].reshape(x1.size, -1)
    cdf = np.cumsum(rows, axis=1)
    flat = np.minimum((rng.random(x1.size)[:, None] >= cdf).sum(axis=1), rows.shape[1] - 1)
    return flat // ch.y2_card, flat % ch.y2_card


class TypicalityTest:
    """
    Joint-typicality test for sequences over a fixed list of variables.

    Sequences are summarized by their joint type (cell counts). The weak
    flavor compares the empirical -1/n log2 p_S of every non-empty variable
    subset S with H(S); the strong flavor compares every cell frequency with
    its probability. Both reject sequences that visit a zero-probability cell.
    """

    def __init__(self, p: JointPmf, names: Sequence[str], epsilon: float, flavor: str = 'weak'):
        if flavor not in TYPICALITY_FLAVORS:
            raise UsageError(f"Unknown typicality flavor {flavor}")
        if epsilon < 0:
            raise UsageError(f"epsilon cannot be negative, got {epsilon}")
        marginal = marginalize(p, names).permute(names)
        self.names = tuple(names)
        self.epsilon = float(epsilon)
        self.flavor = flavor
        self.cards = marginal.mass.shape
        self.strides = np.array([int(np.prod(self.cards[i + 1:], dtype=np.int64)) for i in range(len(self.cards))])
        self.cells = int(np.prod(self.cards, dtype=np.int64))
        self.prob = marginal.mass.ravel()
        self.zero = self.prob <= 0

        if flavor == 'weak':
            subsets = [s for r in range(1, len(names) + 1) for s in itertools.combinations(range(len(names)), r)]
            logs = np.zeros((self.cells, len(subsets)))
            targets = np.zeros(len(subsets))
            for col, subset in enumerate(subsets):
                drop = tuple(a for a in range(len(names)) if a not in subset)
                p_s = marginal.mass.sum(axis=drop, keepdims=True) if drop else marginal.mass
                p_s = np.broadcast_to(p_s, self.cards).ravel()
                with np.errstate(divide='ignore'):
                    logs[:, col] = np.where(self.zero, 0.0, -np.log2(np.where(self.zero, 1.0, p_s)))
                targets[col] = entropy(marginal, [names[a] for a in subset])
            self.logs = logs
            self.targets = targets

    def cell_index(self, sequences: Sequence[np.ndarray]) -> np.ndarray:
        """Flat cell index of each position; sequences broadcast against each other."""
        index = 0
        for seq, stride in zip(sequences, self.strides):
            index = index + np.asarray(seq, dtype=np.int64) * stride
        return np.asarray(index)

    def counts(self, sequences: Sequence[np.ndarray]) -> np.ndarray:
        """Joint types of a batch: (B, cells) counts for sequences broadcast to (B, n)."""
        index = self.cell_index(sequences)
        index = index.reshape(-1, index.shape[-1])
        batch = index.shape[0]
        offsets = (np.arange(batch, dtype=np.int64) * self.cells)[:, None]
        return np.bincount((index + offsets).ravel(), minlength=batch * self.cells).reshape(batch, self.cells)

    def typical(self, counts: np.ndarray, n: int) -> np.ndarray:
        counts = np.atleast_2d(counts)
        ok = counts[:, self.zero].sum(axis=1) == 0
        freq = counts / float(n)
        if self.flavor == 'weak':
            gap = np.abs(freq @ self.logs - self.targets[None, :])
            ok &= np.all(gap <= self.epsilon + 1e-12, axis=1)
        else:
            bound = self.epsilon * self.prob + self.epsilon / self.cells + 1e-12
            ok &= np.all(np.abs(freq - self.prob[None, :]) <= bound[None, :], axis=1)
        return ok

    def is_typical(self, sequences: Sequence[np.ndarray]) -> np.ndarray:
        n = np.asarray(sequences[-1]).shape[-1]
        return self.typical(self.counts(sequences), n)


def _decode(test: TypicalityTest, y: np.ndarray, dims: Tuple[int, ...], fetch,
            chunk: Optional[int] = None) -> Optional[Tuple[int, int, int]]:
    """
    Unique-candidate search over dims = (M0, M_own_cloud, M_own_private, M_other_cloud).

    The last index is existential: a candidate message counts as typical
    when any value of it makes the tuple typical.
    """
    chunk = get_config().decoder_chunk if chunk is None else chunk
    n = y.shape[-1]
    total = int(np.prod(dims, dtype=np.int64))
    per_chunk = max(1, chunk // max(1, n))
    found = set()
    for start in range(0, total, per_chunk):
        flat = np.arange(start, min(total, start + per_chunk))
        idx = np.unravel_index(flat, dims)
        symbols = fetch(*idx) + [y[None, :]]
        ok = test.is_typical(symbols)
        found.update(int(v) for v in np.unique(flat[ok] // dims[-1]))
        if len(found) > 1:
            return None
    if len(found) != 1:
        return None
    return tuple(int(v) for v in np.unravel_index(found.pop(), dims[:-1]))


def decode1(cb: CodebookSet, y1: np.ndarray, test: TypicalityTest,
            chunk: Optional[int] = None) -> Optional[Tuple[int, int, int]]:
    """
    Receiver 1: the unique (i, j, k) such that (u0(i), u1(i,j), x1(i,j,k),
    u2(i,l), y1) is typical for some l, or None (decoding error).
    """
    m0, m12, m11, m21, _ = cb.sizes
    y1 = np.asarray(y1)
    if y1.shape != (cb.n,):
        raise UsageError(f"y1 has shape {y1.shape}, expected ({cb.n},)")
    return _decode(test, y1, (m0, m12, m11, m21),
                   lambda i, j, k, l: [cb.u0[i], cb.u1[i, j], cb.x1[i, j, k], cb.u2[i, l]], chunk)


def decode2(cb: CodebookSet, y2: np.ndarray, test: TypicalityTest,
            chunk: Optional[int] = None) -> Optional[Tuple[int, int, int]]:
    """Receiver 2: the unique (i, l, m), with j existential."""
    m0, m12, _, m21, m22 = cb.sizes
    y2 = np.asarray(y2)
    if y2.shape != (cb.n,):
        raise UsageError(f"y2 has shape {y2.shape}, expected ({cb.n},)")
    return _decode(test, y2, (m0, m21, m22, m12),
                   lambda i, l, m, j: [cb.u0[i], cb.u2[i, l], cb.x2[i, l, m], cb.u1[i, j]], chunk)


def decoder_tests(cfg: SimConfig, epsilon: Optional[float] = None) -> Tuple[TypicalityTest, TypicalityTest]:
    p = cfg.joint
    eps = cfg.epsilon if epsilon is None else epsilon
    return (TypicalityTest(p, DECODER_VARS[1], eps, cfg.typicality),
            TypicalityTest(p, DECODER_VARS[2], eps, cfg.typicality))


def trial_rng(seed: int, n_index: int, trial: int) -> np.random.Generator:
    """Independent stream per (blocklength, trial) so results do not depend on scheduling."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(n_index, trial)))


def run_trial(cfg: SimConfig, n: int, rng: np.random.Generator,
              tests: Tuple[TypicalityTest, TypicalityTest]) -> Tuple[bool, bool]:
    """One codebook, one uniform message, one transmission; returns (error1, error2)."""
    cb = generate_codebooks(cfg, n, rng)
    message = tuple(int(rng.integers(size)) for size in cb.sizes)
    x1, x2 = encode(cb, message)
    y1, y2 = transmit(cfg.channel, x1, x2, rng)
    i, j, k, l, m = message
    error1 = decode1(cb, y1, tests[0]) != (i, j, k)
    error2 = decode2(cb, y2, tests[1]) != (i, l, m)
    return error1, error2


def wilson_interval(k: int, n: int, z: float = Z_95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n == 0:
        return (0.0, 1.0)
    phat = k / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = (z / denom) * sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class SimRow:
    n: int
    trials: int
    errors1: int
    errors2: int

    @property
    def pe1(self) -> float:
        return self.errors1 / self.trials

    @property
    def pe2(self) -> float:
        return self.errors2 / self.trials

    @property
    def pe_max(self) -> float:
        return max(self.pe1, self.pe2)

    @property
    def ci_half_width(self) -> float:
        lo, hi = wilson_interval(max(self.errors1, self.errors2), self.trials)
        return (hi - lo) / 2


@dataclass
class SimReport:
    rows: List[SimRow] = field(default_factory=list)

    COLUMNS = ('n', 'trials', 'pe1', 'pe2', 'pe_max', 'ci_half_width')

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{col: getattr(row, col) for col in self.COLUMNS} for row in self.rows],
                            columns=list(self.COLUMNS))

    def to_csv(self, path: Optional[str] = None) -> Optional[str]:
        return self.to_frame().to_csv(path, index=False, float_format='%.12g')

    @property
    def max_errors(self) -> List[float]:
        return [row.pe_max for row in self.rows]


def estimate_errors(cfg: SimConfig) -> SimReport:
    """
    Error-rate estimates for every configured blocklength.

    Raises:
        ResourceError: before any trial runs if some blocklength's codebook
            exceeds the symbol cap
    """
    config = get_config()
    for n in cfg.blocklengths:
        check_resources(cfg, n)
    tests = decoder_tests(cfg)

    report = SimReport()
    with ThreadPoolExecutor(max_workers=config.worker_count()) as pool:
        for n_index, n in enumerate(cfg.blocklengths):
            outcomes = list(pool.map(
                lambda t: run_trial(cfg, n, trial_rng(cfg.seed, n_index, t), tests), range(cfg.trials)))
            errors1 = sum(e1 for e1, _ in outcomes)
            errors2 = sum(e2 for _, e2 in outcomes)
            row = SimRow(n, cfg.trials, int(errors1), int(errors2))
            logging.info(f"n={n}: pe1={row.pe1:.4f} pe2={row.pe2:.4f} over {cfg.trials} trials")
            report.rows.append(row)
    return report


def typical_fraction(cfg: SimConfig, n: int, trials: int) -> float:
    """Fraction of trials in which the transmitted tuples are typical at both receivers."""
    tests = decoder_tests(cfg)
    hits = 0
    for trial in range(trials):
        rng = trial_rng(cfg.seed, n, trial)
        cb = _draw_words(cfg.factorization, (1, 1, 1, 1, 1), n, rng)
        y1, y2 = transmit(cfg.channel, cb.x1[0, 0, 0], cb.x2[0, 0, 0], rng)
        ok1 = tests[0].is_typical([cb.u0[0], cb.u1[0, 0], cb.x1[0, 0, 0], cb.u2[0, 0], y1])[0]
        ok2 = tests[1].is_typical([cb.u0[0], cb.u2[0, 0], cb.x2[0, 0, 0], cb.u1[0, 0], y2])[0]
        hits += bool(ok1 and ok2)
    return hits / trials
