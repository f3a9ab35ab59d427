#!/usr/bin/env python3
"""
Channel Module for icckit

Handles two-user channel kernels p(y1,y2|x1,x2), the input factorization
families the rate regions are defined over, and the deterministic channel
class where each output is a function of the own input and a recoverable
interference symbol.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from errors import UsageError, ValidationError
from prob_core import (Factor, JointPmf, VarId, cond_mutual_info, compose_factors,
                       deterministic_factor, extend)


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """Discrete memoryless two-user channel, kernel indexed [x1, x2, y1, y2]."""
    kernel: np.ndarray

    def __post_init__(self):
        kernel = np.array(self.kernel, dtype=float)
        if kernel.ndim != 4:
            raise ValidationError(f"Channel kernel must have 4 axes (x1, x2, y1, y2), got {kernel.ndim}")
        if not np.all(np.isfinite(kernel)) or np.any(kernel < 0):
            bad = tuple(int(i) for i in np.argwhere(~np.isfinite(kernel) | (kernel < 0))[0])
            raise ValidationError(f"Channel kernel has invalid entry at (x1, x2, y1, y2) = {bad}")
        sums = kernel.sum(axis=(2, 3))
        tol = get_config().pmf_tol
        bad_rows = np.argwhere(np.abs(sums - 1.0) > tol)
        if len(bad_rows):
            x1, x2 = (int(i) for i in bad_rows[0])
            flat_row = x1 * kernel.shape[1] + x2
            raise ValidationError(
                f"Channel kernel row {flat_row} (x1={x1}, x2={x2}) sums to {sums[x1, x2]:.12g}, not 1")
        kernel.flags.writeable = False
        object.__setattr__(self, 'kernel', kernel)

    @classmethod
    def from_flat(cls, alphabets: Mapping[str, int], kernel: Sequence[float]) -> 'ChannelSpec':
        """Build from row-major (x1, x2, y1, y2) probabilities."""
        try:
            shape = tuple(int(alphabets[k]) for k in ('X1', 'X2', 'Y1', 'Y2'))
        except KeyError as e:
            raise ValidationError(f"Channel alphabets missing {e.args[0]}")
        flat = np.asarray(kernel, dtype=float).ravel()
        expected = int(np.prod(shape))
        if flat.size != expected:
            raise ValidationError(f"Channel kernel has {flat.size} entries, alphabets {shape} need {expected}")
        return cls(flat.reshape(shape))

    @property
    def x1_card(self) -> int:
        return self.kernel.shape[0]

    @property
    def x2_card(self) -> int:
        return self.kernel.shape[1]

    @property
    def y1_card(self) -> int:
        return self.kernel.shape[2]

    @property
    def y2_card(self) -> int:
        return self.kernel.shape[3]

    @property
    def alphabets(self) -> Dict[str, int]:
        return {'X1': self.x1_card, 'X2': self.x2_card, 'Y1': self.y1_card, 'Y2': self.y2_card}

    def factor(self) -> Factor:
        """The kernel as a two-target factor p(y1, y2 | x1, x2)."""
        return Factor((VarId('Y1', self.y1_card), VarId('Y2', self.y2_card)),
                      (VarId('X1', self.x1_card), VarId('X2', self.x2_card)),
                      self.kernel)

    def swapped(self) -> 'ChannelSpec':
        """Relabel sender/receiver 1 as 2 and vice versa."""
        return ChannelSpec(np.transpose(self.kernel, (1, 0, 3, 2)))


def marginal_channels(ch: ChannelSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-receiver marginals of the kernel.

    Returns:
        tuple: p1 indexed [x1, x2, y1] and p2 indexed [x1, x2, y2]
    """
    return ch.kernel.sum(axis=3), ch.kernel.sum(axis=2)


@dataclass(frozen=True, eq=False)
class DeterministicSpec:
    """
    Deterministic channel: V1 = k1(X1), V2 = k2(X2), Y1 = o1(X1, V2), Y2 = o2(X2, V1).

    o1 is indexed [x1, v2] and o2 is indexed [x2, v1].
    """
    k1: np.ndarray
    k2: np.ndarray
    o1: np.ndarray
    o2: np.ndarray
    v1_card: int = 0
    v2_card: int = 0

    def __post_init__(self):
        k1 = np.asarray(self.k1, dtype=int).ravel()
        k2 = np.asarray(self.k2, dtype=int).ravel()
        o1 = np.asarray(self.o1, dtype=int)
        o2 = np.asarray(self.o2, dtype=int)
        v1_card = int(self.v1_card) or int(k1.max()) + 1
        v2_card = int(self.v2_card) or int(k2.max()) + 1

        for name, table, card in (('k1', k1, v1_card), ('k2', k2, v2_card)):
            bad = np.argwhere((table < 0) | (table >= card))
            if len(bad):
                raise ValidationError(f"{name}[{int(bad[0][0])}] = {table[bad[0][0]]} outside 0..{card - 1}")
        if o1.shape != (k1.size, v2_card):
            raise ValidationError(f"o1 must be indexed [x1, v2] with shape {(k1.size, v2_card)}, got {o1.shape}")
        if o2.shape != (k2.size, v1_card):
            raise ValidationError(f"o2 must be indexed [x2, v1] with shape {(k2.size, v1_card)}, got {o2.shape}")
        for name, table in (('o1', o1), ('o2', o2)):
            bad = np.argwhere(table < 0)
            if len(bad):
                raise ValidationError(f"{name}{tuple(int(i) for i in bad[0])} is negative")

        for attr, value in (('k1', k1), ('k2', k2), ('o1', o1), ('o2', o2)):
            value.flags.writeable = False
            object.__setattr__(self, attr, value)
        object.__setattr__(self, 'v1_card', v1_card)
        object.__setattr__(self, 'v2_card', v2_card)

    @property
    def x1_card(self) -> int:
        return self.k1.size

    @property
    def x2_card(self) -> int:
        return self.k2.size

    @property
    def y1_card(self) -> int:
        return int(self.o1.max()) + 1

    @property
    def y2_card(self) -> int:
        return int(self.o2.max()) + 1

    def check_recoverability(self):
        """Raise ValidationError unless V2 = h1(Y1, X1) and V1 = h2(Y2, X2) exist."""
        for label, o, own, other in (('o1', self.o1, 'x1', 'v2'), ('o2', self.o2, 'x2', 'v1')):
            for x, row in enumerate(o):
                seen = {}
                for v, y in enumerate(row):
                    if y in seen:
                        raise ValidationError(
                            f"{label} is not recoverable: ({own}={x}, {other}={seen[y]}) and "
                            f"({own}={x}, {other}={v}) both give output {int(y)}")
                    seen[y] = v

    def _inverse(self, o: np.ndarray, y_card: int) -> np.ndarray:
        inverse = np.full((y_card, o.shape[0]), -1, dtype=int)
        for x, row in enumerate(o):
            for v, y in enumerate(row):
                inverse[y, x] = v
        return inverse

    def h1(self, y1: int, x1: int) -> int:
        """Recover v2 from (y1, x1); -1 when the pair cannot occur."""
        self.check_recoverability()
        return int(self._inverse(self.o1, self.y1_card)[y1, x1])

    def h2(self, y2: int, x2: int) -> int:
        """Recover v1 from (y2, x2); -1 when the pair cannot occur."""
        self.check_recoverability()
        return int(self._inverse(self.o2, self.y2_card)[y2, x2])


def lift_deterministic(d: DeterministicSpec) -> ChannelSpec:
    """
    Realize a deterministic channel as a 0/1 kernel.

    Raises:
        ValidationError: naming the (x, v, v') pair that breaks recoverability
    """
    d.check_recoverability()
    kernel = np.zeros((d.x1_card, d.x2_card, d.y1_card, d.y2_card))
    for x1 in range(d.x1_card):
        for x2 in range(d.x2_card):
            y1 = d.o1[x1, d.k2[x2]]
            y2 = d.o2[x2, d.k1[x1]]
            kernel[x1, x2, y1, y2] = 1.0
    return ChannelSpec(kernel)


class Family(Enum):
    """Input distribution families."""
    GENERAL_EQ1 = 'GENERAL_EQ1'
    TIMESHARE_EQ34 = 'TIMESHARE_EQ34'
    SICC_EQ_PS = 'SICC_EQ_PS'
    AICC_EQ51 = 'AICC_EQ51'
    DICC_EQ59 = 'DICC_EQ59'


# target -> conditioning variables, in composition order
FAMILY_TEMPLATES: Dict[Family, Tuple[Tuple[str, Tuple[str, ...]], ...]] = {
    Family.GENERAL_EQ1: (('U0', ()), ('U1', ('U0',)), ('U2', ('U0',)),
                         ('X1', ('U0', 'U1')), ('X2', ('U0', 'U2'))),
    Family.TIMESHARE_EQ34: (('Q', ()), ('U1', ('Q',)), ('U2', ('Q',)),
                            ('X1', ('Q', 'U1')), ('X2', ('Q', 'U2'))),
    Family.SICC_EQ_PS: (('U0', ()), ('X1', ('U0',)), ('X2', ('U0',))),
    Family.AICC_EQ51: (('X1', ()), ('U2', ('X1',)), ('X2', ('X1', 'U2'))),
    Family.DICC_EQ59: (('V0', ()), ('X1', ('V0',)), ('X2', ('V0',))),
}


@dataclass(frozen=True, eq=False)
class InputFactorization:
    """Conditional factor tables of one input distribution family."""
    family: Family
    tables: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, 'family', family)
        template = FAMILY_TEMPLATES[family]
        expected = [target for target, _ in template]
        missing = [t for t in expected if t not in self.tables]
        extra = sorted(set(self.tables) - set(expected))
        if missing or extra:
            raise ValidationError(
                f"{family.value} needs factors {expected}; missing {missing}, unexpected {extra}")

        tables = {}
        cards = {}
        for target, given in template:
            table = np.array(self.tables[target], dtype=float)
            if table.ndim != len(given) + 1:
                raise ValidationError(
                    f"Factor {target} must have {len(given) + 1} axes ({', '.join(given + (target,))}), "
                    f"got {table.ndim}")
            for axis, parent in enumerate(given):
                if table.shape[axis] != cards[parent]:
                    raise ValidationError(
                        f"Factor {target}: axis {parent} has {table.shape[axis]} entries, "
                        f"{parent} has cardinality {cards[parent]}")
            cards[target] = table.shape[-1]
            table.flags.writeable = False
            tables[target] = table
        object.__setattr__(self, 'tables', tables)
        # row normalization is checked by compose_factors
        self.joint()

    @classmethod
    def build(cls, family, **tables) -> 'InputFactorization':
        return cls(Family(family), dict(tables))

    @property
    def template(self):
        return FAMILY_TEMPLATES[self.family]

    @property
    def cards(self) -> Dict[str, int]:
        return {name: table.shape[-1] for name, table in self.tables.items()}

    def card(self, name: str) -> int:
        return self.cards[name]

    def factors(self) -> List[Factor]:
        cards = self.cards
        return [Factor(tuple([VarId(target, cards[target])]),
                       tuple(VarId(g, cards[g]) for g in given),
                       self.tables[target])
                for target, given in self.template]

    def joint(self) -> JointPmf:
        """Joint of the input-side variables only."""
        return compose_factors(self.factors())

    def to_dict(self) -> dict:
        return {'family': self.family.value,
                'factors': {name: self.tables[name].tolist() for name, _ in self.template}}

    def swapped(self) -> 'InputFactorization':
        """Exchange the roles of users 1 and 2 (GENERAL_EQ1 only)."""
        if self.family is not Family.GENERAL_EQ1:
            raise UsageError(f"swapped() is defined for GENERAL_EQ1, not {self.family.value}")
        t = self.tables
        return InputFactorization(self.family, {'U0': t['U0'], 'U1': t['U2'], 'U2': t['U1'],
                                                'X1': t['X2'], 'X2': t['X1']})


def induce_joint(f: InputFactorization, ch: ChannelSpec) -> JointPmf:
    """
    Joint over the family's variables plus Y1, Y2.

    Raises:
        ValidationError: if X1/X2 cardinalities disagree with the channel
    """
    for name, expected in (('X1', ch.x1_card), ('X2', ch.x2_card)):
        if f.card(name) != expected:
            raise ValidationError(
                f"Alphabet mismatch: {name} has {f.card(name)} symbols in the factorization, "
                f"channel expects {expected}")
    joint = extend(f.joint(), ch.factor())
    return JointPmf(joint.vars, joint.mass)


def append_deterministic(p: JointPmf, target: VarId, given: Sequence[str], mapping) -> JointPmf:
    """Append a variable fixed by a lookup table over existing variables."""
    parents = [p.var(g) for g in given]
    return extend(p, deterministic_factor(target, parents, mapping))


def check_strong_interference(ch: ChannelSpec, f: InputFactorization,
                              tol: float = 1e-12) -> Tuple[bool, Tuple[float, float]]:
    """
    Evaluate both strong-interference conditions on one distribution.

    Returns:
        tuple: (holds, (slack_1, slack_2)) where
            slack_1 = I(X1;Y2|X2U0) - I(X1;Y1|X2U0) and
            slack_2 = I(X2;Y1|X1U0) - I(X2;Y2|X1U0)
    """
    if f.family is not Family.SICC_EQ_PS:
        raise UsageError(f"Strong-interference check needs a SICC_EQ_PS factorization, got {f.family.value}")
    p = induce_joint(f, ch)
    slack_1 = cond_mutual_info(p, 'X1', 'Y2', ('X2', 'U0')) - cond_mutual_info(p, 'X1', 'Y1', ('X2', 'U0'))
    slack_2 = cond_mutual_info(p, 'X2', 'Y1', ('X1', 'U0')) - cond_mutual_info(p, 'X2', 'Y2', ('X1', 'U0'))
    return (slack_1 >= -tol and slack_2 >= -tol), (slack_1, slack_2)


def aux_cards(family: Family, ch: ChannelSpec, cards: Optional[Mapping[str, int]] = None) -> Dict[str, int]:
    """Cardinalities of every family variable: X from the channel, the rest from `cards` or config."""
    default = get_config().aux_card
    cards = dict(cards or {})
    result = {}
    for target, _ in FAMILY_TEMPLATES[Family(family)]:
        if target == 'X1':
            result[target] = ch.x1_card
        elif target == 'X2':
            result[target] = ch.x2_card
        else:
            result[target] = int(cards.get(target, default))
    return result


def random_factorization(family, cards: Mapping[str, int], rng: np.random.Generator) -> InputFactorization:
    """Draw every factor row independently from the uniform Dirichlet distribution."""
    family = Family(family)
    tables = {}
    for target, given in FAMILY_TEMPLATES[family]:
        shape = tuple(cards[g] for g in given)
        k = cards[target]
        rows = rng.dirichlet(np.ones(k), size=int(np.prod(shape, dtype=np.int64)))
        tables[target] = rows.reshape(shape + (k,))
    return InputFactorization(family, tables)


def uniform_factorization(family, cards: Mapping[str, int]) -> InputFactorization:
    """Every factor row uniform (independent uniform inputs for auxiliary-free families)."""
    family = Family(family)
    tables = {}
    for target, given in FAMILY_TEMPLATES[family]:
        shape = tuple(cards[g] for g in given) + (cards[target],)
        tables[target] = np.full(shape, 1.0 / cards[target])
    return InputFactorization(family, tables)


def _identity_rows(n: int) -> np.ndarray:
    return np.eye(n)


def _uniform_rows(mask: np.ndarray) -> np.ndarray:
    """Normalize 0/1 masks row-wise, falling back to uniform on empty rows."""
    mask = mask.astype(float)
    sums = mask.sum(axis=-1, keepdims=True)
    uniform = np.full_like(mask, 1.0 / mask.shape[-1])
    return np.where(sums > 0, mask / np.where(sums > 0, sums, 1.0), uniform)


def as_general(f: InputFactorization, d: Optional[DeterministicSpec] = None) -> InputFactorization:
    """
    Embed a specialized factorization into the GENERAL_EQ1 family.

    TIMESHARE_EQ34 identifies Q with U0; SICC_EQ_PS sets U1 = X1 and
    U2 = X2; AICC_EQ51 sets U0 = U1 = X1; DICC_EQ59 (which needs `d`) sets
    U0 = V0, U1 = k1(X1), U2 = k2(X2).
    """
    t = f.tables
    if f.family is Family.GENERAL_EQ1:
        return f

    if f.family is Family.TIMESHARE_EQ34:
        return InputFactorization(Family.GENERAL_EQ1, {'U0': t['Q'], 'U1': t['U1'], 'U2': t['U2'],
                                                       'X1': t['X1'], 'X2': t['X2']})

    if f.family is Family.SICC_EQ_PS:
        c0, n1, n2 = f.card('U0'), f.card('X1'), f.card('X2')
        x1 = np.broadcast_to(_identity_rows(n1), (c0, n1, n1)).copy()
        x2 = np.broadcast_to(_identity_rows(n2), (c0, n2, n2)).copy()
        return InputFactorization(Family.GENERAL_EQ1, {'U0': t['U0'], 'U1': t['X1'], 'U2': t['X2'],
                                                       'X1': x1, 'X2': x2})

    if f.family is Family.AICC_EQ51:
        n1 = f.card('X1')
        x1 = np.zeros((n1, n1, n1))
        for u0 in range(n1):
            x1[u0, :, u0] = 1.0
        return InputFactorization(Family.GENERAL_EQ1, {'U0': t['X1'], 'U1': _identity_rows(n1),
                                                       'U2': t['U2'], 'X1': x1, 'X2': t['X2']})

    if f.family is Family.DICC_EQ59:
        if d is None:
            raise UsageError("DICC_EQ59 embedding needs the deterministic channel maps")
        tables = {'U0': t['V0']}
        for user, k, v_card in (('1', d.k1, d.v1_card), ('2', d.k2, d.v2_card)):
            px = t['X' + user]                        # [v0, x]
            onehot = np.eye(v_card)[k]                # [x, v]
            pv = px @ onehot                          # [v0, v]
            joint = px[:, None, :] * onehot.T[None]   # [v0, v, x]
            mask = np.broadcast_to(onehot.T[None], joint.shape)
            cond = np.where(pv[..., None] > 0, joint / np.where(pv[..., None] > 0, pv[..., None], 1.0),
                            _uniform_rows(mask))
            tables['U' + user] = pv
            tables['X' + user] = cond
        return InputFactorization(Family.GENERAL_EQ1, tables)

    raise UsageError(f"No GENERAL_EQ1 embedding for {f.family.value}")


# Strong-interference sweeps over the SICC family

@dataclass
class SweepReport:
    """Family-level strong-interference verdict."""
    holds: bool
    checked: int
    min_slack: float
    worst: Optional[InputFactorization] = None

    def summary(self) -> str:
        verdict = "holds" if self.holds else "fails"
        return f"{verdict} on {self.checked} sampled distributions, min slack {self.min_slack:.12g}"


def _simplex_grid(k: int, step: float) -> np.ndarray:
    m = int(round(1.0 / step))
    if m < 1 or abs(m * step - 1.0) > 1e-9:
        raise UsageError(f"Grid step {step} must divide 1")
    points = []
    for bars in itertools.combinations(range(m + k - 1), k - 1):
        edges = (-1,) + bars + (m + k - 1,)
        points.append([(edges[i + 1] - edges[i] - 1) / m for i in range(k)])
    return np.array(points)


def _grid_factorizations(family: Family, cards: Mapping[str, int], step: float,
                         limit: int, rng: np.random.Generator):
    rows = []
    for target, given in FAMILY_TEMPLATES[family]:
        n_rows = int(np.prod([cards[g] for g in given], dtype=np.int64))
        grid = _simplex_grid(cards[target], step)
        rows.extend([(target, grid)] * n_rows)

    total = int(np.prod([len(grid) for _, grid in rows], dtype=np.float64))
    if total <= limit:
        choices = itertools.product(*[range(len(grid)) for _, grid in rows])
    else:
        logging.warning(f"Simplex grid has {total} points; sampling {limit} of them")
        choices = (tuple(int(rng.integers(len(grid))) for _, grid in rows) for _ in range(limit))

    for choice in choices:
        tables: Dict[str, list] = {}
        for (target, grid), idx in zip(rows, choice):
            tables.setdefault(target, []).append(grid[idx])
        shaped = {}
        for target, given in FAMILY_TEMPLATES[family]:
            shape = tuple(cards[g] for g in given) + (cards[target],)
            shaped[target] = np.array(tables[target]).reshape(shape)
        yield InputFactorization(family, shaped)


def strong_interference_sweep(ch: ChannelSpec, cards: Optional[Mapping[str, int]] = None,
                              grid_step: Optional[float] = None, samples: Optional[int] = None,
                              seed: Optional[int] = None) -> SweepReport:
    """
    Check the strong-interference conditions over a simplex grid of SICC
    distributions plus uniform-Dirichlet samples.
    """
    config = get_config()
    grid_step = config.sweep_grid_step if grid_step is None else grid_step
    samples = config.sweep_samples if samples is None else samples
    seed = config.seed if seed is None else seed
    all_cards = aux_cards(Family.SICC_EQ_PS, ch, cards)

    rng = np.random.default_rng(seed)
    candidates = list(_grid_factorizations(Family.SICC_EQ_PS, all_cards, grid_step,
                                           config.sweep_grid_limit, rng))
    candidates += [random_factorization(Family.SICC_EQ_PS, all_cards, rng) for _ in range(samples)]
    logging.info(f"Strong-interference sweep over {len(candidates)} distributions")

    def evaluate(f):
        _, slacks = check_strong_interference(ch, f)
        return min(slacks)

    with ThreadPoolExecutor(max_workers=config.worker_count()) as pool:
        slacks = list(pool.map(evaluate, candidates))

    worst = int(np.argmin(slacks))
    min_slack = float(slacks[worst])
    return SweepReport(holds=min_slack >= -1e-12, checked=len(candidates),
                       min_slack=min_slack, worst=candidates[worst])


# Standard channels

def identity_channel(card: int = 2) -> ChannelSpec:
    """Y1 = X1, Y2 = X2."""
    kernel = np.zeros((card, card, card, card))
    for x1 in range(card):
        for x2 in range(card):
            kernel[x1, x2, x1, x2] = 1.0
    return ChannelSpec(kernel)


def bsc_pair(crossover: float) -> ChannelSpec:
    """Two independent binary symmetric channels, no interference."""
    bsc = np.array([[1 - crossover, crossover], [crossover, 1 - crossover]])
    kernel = np.einsum('ac,bd->abcd', bsc, bsc)
    return ChannelSpec(kernel)


def swap_channel(crossover: float = 0.2) -> ChannelSpec:
    """
    Y1 = (X1 xor Z1, X2) and Y2 = (X1, X2 xor Z2) as 4-ary symbols.

    Each receiver sees the other sender noiselessly and its own sender
    through a BSC, so both strong-interference conditions hold.
    """
    kernel = np.zeros((2, 2, 4, 4))
    for x1, x2, z1, z2 in itertools.product(range(2), repeat=4):
        prob = (crossover if z1 else 1 - crossover) * (crossover if z2 else 1 - crossover)
        kernel[x1, x2, 2 * (x1 ^ z1) + x2, 2 * x1 + (x2 ^ z2)] += prob
    return ChannelSpec(kernel)


def zero_capacity_channel(x_card: int = 2, y_card: int = 2) -> ChannelSpec:
    """Outputs uniform and independent of the inputs."""
    kernel = np.full((x_card, x_card, y_card, y_card), 1.0 / (y_card * y_card))
    return ChannelSpec(kernel)


def random_channel(rng: np.random.Generator, x1: int = 2, x2: int = 2, y1: int = 2, y2: int = 2) -> ChannelSpec:
    rows = rng.dirichlet(np.ones(y1 * y2), size=x1 * x2)
    return ChannelSpec(rows.reshape(x1, x2, y1, y2))


def xor_deterministic(bits: int = 1) -> DeterministicSpec:
    """Bitwise XOR of `bits`-bit inputs: Y1 = X1 ^ X2, Y2 = X2 ^ X1."""
    card = 2 ** bits
    symbols = np.arange(card)
    table = symbols[:, None] ^ symbols[None, :]
    return DeterministicSpec(k1=symbols, k2=symbols, o1=table, o2=table)


def pairing_deterministic(card: int = 2) -> DeterministicSpec:
    """Y1 = (x1, v2) and Y2 = (x2, v1) packed as card^2-ary symbols."""
    symbols = np.arange(card)
    table = symbols[:, None] * card + symbols[None, :]
    return DeterministicSpec(k1=symbols, k2=symbols, o1=table, o2=table)
