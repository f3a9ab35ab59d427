#!/usr/bin/env python3
"""
Regions Module for icckit

Builds every achievable rate region as an IneqSystem over a joint
distribution: the split-rate (implicit) region, the explicit rate-triple
region, the strong-interference, no-common-information, asymmetric and
deterministic specializations, plus the sampled union over input
distributions and the time-sharing containment check.

Every row bound is a conditional mutual information (or, for the
deterministic class, a conditional entropy) of the induced joint, so all
right-hand sides are nonnegative.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from channel import (ChannelSpec, DeterministicSpec, Family, InputFactorization, as_general,
                     aux_cards, induce_joint, lift_deterministic, append_deterministic,
                     random_factorization)
from config import get_config
from errors import UsageError, ValidationError
from polytope import (IneqSystem, RatePoint, fourier_motzkin, member_many, prune,
                      sample_members)
from prob_core import JointPmf, VarId, cond_mutual_info, conditional_entropy

SPLIT_COORDS = ('R0', 'R12', 'R11', 'R21', 'R22')
TRIPLE_COORDS = ('R0', 'R1', 'R2')
CMG_COORDS = ('R12', 'R11', 'R21', 'R22')
AICC_SPLIT_COORDS = ('R0', 'R21', 'R22')
AICC_COORDS = ('R0', 'R2')

SPLITS = {'R1': ('R12', 'R11'), 'R2': ('R21', 'R22')}


class RegionKind(Enum):
    """Region constructors selectable from the command line."""
    IMPLICIT_M = 'IMPLICIT_M'
    EXPLICIT = 'EXPLICIT'
    SICC = 'SICC'
    SICC_REDUCED = 'SICC_REDUCED'
    CMG = 'CMG'
    AICC_M = 'AICC_M'
    AICC = 'AICC'
    DICC = 'DICC'


KIND_FAMILY = {
    RegionKind.IMPLICIT_M: Family.GENERAL_EQ1,
    RegionKind.EXPLICIT: Family.GENERAL_EQ1,
    RegionKind.SICC: Family.SICC_EQ_PS,
    RegionKind.SICC_REDUCED: Family.SICC_EQ_PS,
    RegionKind.CMG: Family.TIMESHARE_EQ34,
    RegionKind.AICC_M: Family.AICC_EQ51,
    RegionKind.AICC: Family.AICC_EQ51,
    RegionKind.DICC: Family.DICC_EQ59,
}

KIND_COORDS = {
    RegionKind.IMPLICIT_M: SPLIT_COORDS,
    RegionKind.EXPLICIT: TRIPLE_COORDS,
    RegionKind.SICC: TRIPLE_COORDS,
    RegionKind.SICC_REDUCED: TRIPLE_COORDS,
    RegionKind.CMG: CMG_COORDS,
    RegionKind.AICC_M: AICC_SPLIT_COORDS,
    RegionKind.AICC: AICC_COORDS,
    RegionKind.DICC: TRIPLE_COORDS,
}


# Row bounds

class Bound(NamedTuple):
    """A row right-hand side together with the expression it was evaluated from."""
    value: float
    label: str

    def __add__(self, other: 'Bound') -> 'Bound':
        return Bound(self.value + other.value, f"{self.label}+{other.label}")


def _split(group: str) -> List[str]:
    return group.split() if group else []


def mi(p: JointPmf, a: str, b: str, c: str = '') -> Bound:
    """I(A;B|C) with space-separated variable groups, e.g. mi(p, 'U1 X1', 'Y1', 'U0 U2')."""
    value = cond_mutual_info(p, _split(a), _split(b), _split(c))
    given = f"|{''.join(_split(c))}" if c else ''
    return Bound(value, f"I({''.join(_split(a))};{''.join(_split(b))}{given})")


def h(p: JointPmf, a: str, c: str = '') -> Bound:
    """H(A|C) with space-separated variable groups."""
    value = conditional_entropy(p, _split(a), _split(c))
    given = f"|{''.join(_split(c))}" if c else ''
    return Bound(value, f"H({''.join(_split(a))}{given})")


@dataclass(frozen=True)
class DecoderTerms:
    """
    The five bounds seen by one receiver.

    For receiver 1 these are I(X1;Y1|U0U1U2), I(U1X1;Y1|U0U2),
    I(X1U2;Y1|U0U1), I(U1X1U2;Y1|U0) and I(U0U1X1U2;Y1).
    """
    private: Bound
    own: Bound
    cross: Bound
    joint: Bound
    total: Bound

    @classmethod
    def mutual_info(cls, p: JointPmf, user: int) -> 'DecoderTerms':
        own, other = (1, 2) if user == 1 else (2, 1)
        u, x, v, y = f"U{own}", f"X{own}", f"U{other}", f"Y{own}"
        return cls(private=mi(p, x, y, f"U0 {u} {v}"),
                   own=mi(p, f"{u} {x}", y, f"U0 {v}"),
                   cross=mi(p, f"{x} {v}", y, f"U0 {u}"),
                   joint=mi(p, f"{u} {x} {v}", y, 'U0'),
                   total=mi(p, f"U0 {u} {x} {v}", y))

    @classmethod
    def entropies(cls, p: JointPmf, user: int) -> 'DecoderTerms':
        """Deterministic-channel form: every bound collapses to an output entropy."""
        own, other = (1, 2) if user == 1 else (2, 1)
        v_own, v_other, y = f"V{own}", f"V{other}", f"Y{own}"
        return cls(private=h(p, y, f"V0 {v_own} {v_other}"),
                   own=h(p, y, f"V0 {v_other}"),
                   cross=h(p, y, f"V0 {v_own}"),
                   joint=h(p, y, 'V0'),
                   total=h(p, y))


def _system(coords: Sequence[str], rows: Sequence[Tuple[dict, Bound]]) -> IneqSystem:
    return IneqSystem.from_rows(coords, [(coeffs, bound.value, bound.label) for coeffs, bound in rows])


# Factorization checks

_INDEPENDENCES = {
    Family.GENERAL_EQ1: (('U1', 'U2', 'U0'), ('X1', 'U2', 'U0 U1'), ('X2', 'U1 X1', 'U0 U2')),
    Family.TIMESHARE_EQ34: (('U1', 'U2', 'Q'), ('X1', 'U2', 'Q U1'), ('X2', 'U1 X1', 'Q U2')),
    Family.SICC_EQ_PS: (('X1', 'X2', 'U0'),),
    Family.AICC_EQ51: (),
    Family.DICC_EQ59: (('X1', 'X2', 'V0'),),
}


def validate_factorization(p: JointPmf, family: Family, tol: Optional[float] = None):
    """
    Check the conditional independences the family's product form implies.

    The channel constraint (outputs independent of the auxiliaries given
    both inputs) is checked as well when Y1 and Y2 are present.

    Raises:
        UsageError: if a variable of the family is missing from the joint
        ValidationError: naming the first independence that fails
    """
    tol = get_config().independence_tol if tol is None else tol
    family = Family(family)
    checks = list(_INDEPENDENCES[family])
    inputs = {'X1', 'X2'}
    aux = [name for name in p.names if name not in inputs | {'Y1', 'Y2'}]
    if 'Y1' in p.names and 'Y2' in p.names and aux:
        checks.append(('Y1 Y2', ' '.join(aux), 'X1 X2'))

    for a, b, c in checks:
        value = cond_mutual_info(p, _split(a), _split(b), _split(c))
        if abs(value) >= tol:
            raise ValidationError(
                f"{family.value}: {a} and {b} are not independent given {c} "
                f"(I = {value:.3e} bits)")


def validate_eq1(p: JointPmf, tol: Optional[float] = None):
    validate_factorization(p, Family.GENERAL_EQ1, tol)


# Split-rate and explicit regions

def implicit_region(p: JointPmf) -> IneqSystem:
    """
    Split-rate region over (R0, R12, R11, R21, R22).

    Rows 1-5 bound what receiver 1 decodes, rows 6-10 receiver 2.
    """
    validate_eq1(p)
    t1, t2 = DecoderTerms.mutual_info(p, 1), DecoderTerms.mutual_info(p, 2)
    rows = [
        ({'R11': 1}, t1.private),
        ({'R12': 1, 'R11': 1}, t1.own),
        ({'R11': 1, 'R21': 1}, t1.cross),
        ({'R12': 1, 'R11': 1, 'R21': 1}, t1.joint),
        ({'R0': 1, 'R12': 1, 'R11': 1, 'R21': 1}, t1.total),
        ({'R22': 1}, t2.private),
        ({'R21': 1, 'R22': 1}, t2.own),
        ({'R22': 1, 'R12': 1}, t2.cross),
        ({'R21': 1, 'R22': 1, 'R12': 1}, t2.joint),
        ({'R0': 1, 'R21': 1, 'R22': 1, 'R12': 1}, t2.total),
    ]
    return _system(SPLIT_COORDS, rows)


def _triple_rows(t1: DecoderTerms, t2: DecoderTerms, complete: bool) -> List[Tuple[dict, Bound]]:
    rows = [
        ({'R0': 1}, t1.total),
        ({'R0': 1}, t2.total),
        ({'R1': 1}, t1.own),
        ({'R2': 1}, t2.own),
        ({'R1': 1, 'R2': 1}, t1.cross + t2.cross),
        ({'R1': 1, 'R2': 1}, t1.joint + t2.private),
        ({'R0': 1, 'R1': 1, 'R2': 1}, t1.total + t2.private),
        ({'R1': 1, 'R2': 1}, t1.private + t2.joint),
        ({'R0': 1, 'R1': 1, 'R2': 1}, t1.private + t2.total),
        ({'R1': 2, 'R2': 1}, t1.joint + t1.private + t2.cross),
        ({'R0': 1, 'R1': 2, 'R2': 1}, t1.total + t1.private + t2.cross),
        ({'R1': 1, 'R2': 2}, t2.joint + t2.private + t1.cross),
        ({'R0': 1, 'R1': 1, 'R2': 2}, t2.total + t2.private + t1.cross),
    ]
    if complete:
        # rows of the exact projection that the 13-row listing leaves out
        rows += [
            ({'R0': 1, 'R1': 1}, t1.total),
            ({'R0': 1, 'R2': 1}, t2.total),
            ({'R1': 1}, t1.private + t2.cross),
            ({'R2': 1}, t2.private + t1.cross),
        ]
    return rows


def explicit_region(p: JointPmf, complete: bool = False) -> IneqSystem:
    """
    Rate-triple region over (R0, R1, R2).

    Args:
        p: joint over U0, U1, U2, X1, X2, Y1, Y2
        complete: append the four rows that make the system equal to the
            projection of the split-rate region

    Returns:
        IneqSystem: 13 rows, or 17 when complete
    """
    validate_eq1(p)
    t1, t2 = DecoderTerms.mutual_info(p, 1), DecoderTerms.mutual_info(p, 2)
    return _system(TRIPLE_COORDS, _triple_rows(t1, t2, complete))


def project_split_rates(s: IneqSystem, reduce: bool = True) -> IneqSystem:
    """
    Replace split coordinates by their sums R1 = R12 + R11, R2 = R21 + R22.

    Only the sums whose parts are present are formed; the parts are then
    eliminated by Fourier-Motzkin.
    """
    eliminate = []
    for total, parts in SPLITS.items():
        present = [c for c in parts if c in s.coords]
        if not present:
            continue
        s = s.add_coords([total])
        coeffs = {c: 1.0 for c in present}
        coeffs[total] = -1.0
        s = s.with_equality(coeffs, 0.0, label=f"{total}=sum")
        eliminate.extend(present)
    if not eliminate:
        raise UsageError(f"No split coordinates to project in {list(s.coords)}")
    projected = fourier_motzkin(s, eliminate)
    return prune(projected) if reduce else projected


# Strong interference

def sicc_region(p: JointPmf, tol: float = 1e-12) -> IneqSystem:
    """
    Strong-interference region over (R0, R1, R2).

    The two sum-rate minima are expanded into one row per argument; equal
    arguments collapse to a single row.
    """
    validate_factorization(p, Family.SICC_EQ_PS)
    rows = [
        ({'R1': 1}, mi(p, 'X1', 'Y1', 'X2 U0')),
        ({'R2': 1}, mi(p, 'X2', 'Y2', 'X1 U0')),
    ]
    for coeffs, pair in (({'R1': 1, 'R2': 1}, (mi(p, 'X1 X2', 'Y1', 'U0'), mi(p, 'X1 X2', 'Y2', 'U0'))),
                         ({'R0': 1, 'R1': 1, 'R2': 1}, (mi(p, 'X1 X2', 'Y1'), mi(p, 'X1 X2', 'Y2')))):
        rows.append((coeffs, pair[0]))
        if abs(pair[0].value - pair[1].value) > tol:
            rows.append((coeffs, pair[1]))
    return _system(TRIPLE_COORDS, rows)


def sicc_reduced_region(p: JointPmf) -> IneqSystem:
    """The split-rate rows with U1 = X1 and U2 = X2 substituted, eight rows over (R0, R1, R2)."""
    validate_factorization(p, Family.SICC_EQ_PS)
    rows = [
        ({'R1': 1}, mi(p, 'X1', 'Y1', 'U0 X2')),
        ({'R2': 1}, mi(p, 'X2', 'Y2', 'U0 X1')),
        ({'R1': 1, 'R2': 1}, mi(p, 'X1 X2', 'Y1', 'U0')),
        ({'R0': 1, 'R1': 1, 'R2': 1}, mi(p, 'U0 X1 X2', 'Y1')),
        ({'R2': 1}, mi(p, 'X2', 'Y2', 'U0 X1')),
        ({'R1': 1}, mi(p, 'X1', 'Y2', 'U0 X2')),
        ({'R2': 1, 'R1': 1}, mi(p, 'X2 X1', 'Y2', 'U0')),
        ({'R0': 1, 'R2': 1, 'R1': 1}, mi(p, 'U0 X2 X1', 'Y2')),
    ]
    return _system(TRIPLE_COORDS, rows)


# No common information

@dataclass
class CmgRegion:
    """Split-rate region of the interference channel without common information."""
    simplified: IneqSystem
    unsimplified: IneqSystem
    projected: IneqSystem


def cmg_region(p: JointPmf) -> CmgRegion:
    """
    Region over (R12, R11, R21, R22) with time-sharing variable Q.

    `simplified` drops U1 (U2) from the left of the receiver-1 (receiver-2)
    bounds using the Markov chain U1 - (X1, Q) - Y1; `unsimplified` keeps
    them. `projected` is the (R1, R2) region.
    """
    validate_factorization(p, Family.TIMESHARE_EQ34)
    shape = [
        {'R11': 1}, {'R12': 1, 'R11': 1}, {'R11': 1, 'R21': 1}, {'R12': 1, 'R11': 1, 'R21': 1},
        {'R22': 1}, {'R21': 1, 'R22': 1}, {'R22': 1, 'R12': 1}, {'R21': 1, 'R22': 1, 'R12': 1},
    ]
    simplified = [
        mi(p, 'X1', 'Y1', 'U1 U2 Q'), mi(p, 'X1', 'Y1', 'U2 Q'),
        mi(p, 'X1 U2', 'Y1', 'U1 Q'), mi(p, 'X1 U2', 'Y1', 'Q'),
        mi(p, 'X2', 'Y2', 'U2 U1 Q'), mi(p, 'X2', 'Y2', 'U1 Q'),
        mi(p, 'X2 U1', 'Y2', 'U2 Q'), mi(p, 'X2 U1', 'Y2', 'Q'),
    ]
    unsimplified = [
        mi(p, 'X1', 'Y1', 'U1 U2 Q'), mi(p, 'U1 X1', 'Y1', 'U2 Q'),
        mi(p, 'X1 U2', 'Y1', 'U1 Q'), mi(p, 'U1 X1 U2', 'Y1', 'Q'),
        mi(p, 'X2', 'Y2', 'U2 U1 Q'), mi(p, 'U2 X2', 'Y2', 'U1 Q'),
        mi(p, 'X2 U1', 'Y2', 'U2 Q'), mi(p, 'U2 X2 U1', 'Y2', 'Q'),
    ]
    simple = _system(CMG_COORDS, list(zip(shape, simplified)))
    full = _system(CMG_COORDS, list(zip(shape, unsimplified)))
    return CmgRegion(simple, full, project_split_rates(simple))


# Asymmetric channel

def aicc_regions(p: JointPmf) -> Tuple[IneqSystem, IneqSystem]:
    """
    Regions for the channel where sender 1 carries only the common message.

    Returns:
        tuple: (split region over (R0, R21, R22), region over (R0, R2))
    """
    validate_factorization(p, Family.AICC_EQ51)
    common_1 = mi(p, 'X1 U2', 'Y1')
    private_only = mi(p, 'X2', 'Y2', 'U2 X1')
    private_all = mi(p, 'X2', 'Y2', 'X1')
    total_2 = mi(p, 'X1 X2', 'Y2')

    split = _system(AICC_SPLIT_COORDS, [
        ({'R0': 1, 'R21': 1}, common_1),
        ({'R22': 1}, private_only),
        ({'R21': 1, 'R22': 1}, private_all),
        ({'R0': 1, 'R21': 1, 'R22': 1}, total_2),
    ])
    merged = _system(AICC_COORDS, [
        ({'R0': 1}, common_1),
        ({'R2': 1}, private_all),
        ({'R0': 1, 'R2': 1}, total_2),
        ({'R0': 1, 'R2': 1}, common_1 + private_only),
    ])
    return split, merged


# Deterministic channels

def dicc_joint(d: DeterministicSpec, f: InputFactorization) -> JointPmf:
    """Joint over V0, X1, X2, Y1, Y2 extended with V1 = k1(X1) and V2 = k2(X2)."""
    if f.family is not Family.DICC_EQ59:
        raise UsageError(f"Deterministic region needs a DICC_EQ59 factorization, got {f.family.value}")
    p = induce_joint(f, lift_deterministic(d))
    p = append_deterministic(p, VarId('V1', d.v1_card), ['X1'], d.k1)
    return append_deterministic(p, VarId('V2', d.v2_card), ['X2'], d.k2)


def dicc_region(d: DeterministicSpec, f: InputFactorization, complete: bool = False) -> IneqSystem:
    """13 entropy rows over (R0, R1, R2); 17 with `complete`."""
    p = dicc_joint(d, f)
    validate_factorization(p, Family.DICC_EQ59)
    t1, t2 = DecoderTerms.entropies(p, 1), DecoderTerms.entropies(p, 2)
    return _system(TRIPLE_COORDS, _triple_rows(t1, t2, complete))


# Dispatch

def general_joint(f: InputFactorization, ch: Optional[ChannelSpec] = None,
                  d: Optional[DeterministicSpec] = None) -> JointPmf:
    """Embed any family into GENERAL_EQ1 and attach the channel outputs."""
    if ch is None:
        if d is None:
            raise UsageError("Need a channel or a deterministic channel")
        ch = lift_deterministic(d)
    return induce_joint(as_general(f, d), ch)


def region_for(kind, f: InputFactorization, ch: Optional[ChannelSpec] = None,
               d: Optional[DeterministicSpec] = None, complete: bool = False) -> IneqSystem:
    """
    Build the region of the given kind.

    IMPLICIT_M and EXPLICIT accept any family that embeds into
    GENERAL_EQ1; the other kinds need their own family.
    """
    kind = RegionKind(kind)
    if ch is None and d is not None:
        ch = lift_deterministic(d)
    if ch is None:
        raise UsageError(f"{kind.value} region needs a channel")

    if kind in (RegionKind.IMPLICIT_M, RegionKind.EXPLICIT):
        p = general_joint(f, ch, d)
        return implicit_region(p) if kind is RegionKind.IMPLICIT_M else explicit_region(p, complete)

    required = KIND_FAMILY[kind]
    if f.family is not required:
        raise UsageError(f"{kind.value} region needs a {required.value} factorization, got {f.family.value}")

    if kind is RegionKind.DICC:
        if d is None:
            raise UsageError("DICC region needs a deterministic channel description")
        return dicc_region(d, f, complete)

    p = induce_joint(f, ch)
    if kind is RegionKind.SICC:
        return sicc_region(p)
    if kind is RegionKind.SICC_REDUCED:
        return sicc_reduced_region(p)
    if kind is RegionKind.CMG:
        return cmg_region(p).simplified
    split, merged = aicc_regions(p)
    return split if kind is RegionKind.AICC_M else merged


# Union over sampled distributions

@dataclass
class UnionVerdict:
    accepted: bool
    witness_index: Optional[int] = None
    witness: Optional[InputFactorization] = None
    label: str = 'inner approximation'


class UnionOracle:
    """
    Membership oracle for the union of explicit regions over a finite set
    of input distributions.

    Candidates are the caller's extra factorizations followed by
    uniform-Dirichlet draws. Every accepted point lies in the region of a
    concrete distribution, so the oracle is an inner approximation of the
    true union.
    """

    def __init__(self, ch: ChannelSpec, family=Family.GENERAL_EQ1, samples: Optional[int] = None,
                 seed: Optional[int] = None, cards: Optional[Dict[str, int]] = None,
                 extra: Sequence[InputFactorization] = (), d: Optional[DeterministicSpec] = None,
                 complete: bool = True):
        config = get_config()
        self.family = Family(family)
        self.channel = ch if ch is not None else lift_deterministic(d)
        self.deterministic = d
        self.complete = complete
        samples = config.union_samples if samples is None else samples
        seed = config.seed if seed is None else seed

        rng = np.random.default_rng(seed)
        all_cards = aux_cards(self.family, self.channel, cards)
        self.candidates: List[InputFactorization] = list(extra)
        self.candidates += [random_factorization(self.family, all_cards, rng) for _ in range(samples)]

        with ThreadPoolExecutor(max_workers=config.worker_count()) as pool:
            self.regions: List[IneqSystem] = list(pool.map(self._region, self.candidates))
        logging.info(f"Union oracle over {len(self.regions)} {self.family.value} distributions")

    def _region(self, f: InputFactorization) -> IneqSystem:
        return explicit_region(general_joint(f, self.channel, self.deterministic), self.complete)

    def __len__(self):
        return len(self.regions)

    def accepts(self, r: RatePoint, tol: Optional[float] = None) -> UnionVerdict:
        """Accept r when some candidate's region contains it; report the first witness."""
        x = r.vector(TRIPLE_COORDS)[None, :]
        for i, region in enumerate(self.regions):
            if member_many(region, x, tol)[0]:
                return UnionVerdict(True, i, self.candidates[i])
        return UnionVerdict(False)

    def accepts_many(self, points: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, len(TRIPLE_COORDS))
        accepted = np.zeros(len(points), dtype=bool)
        for region in self.regions:
            accepted |= member_many(region, points, tol)
        return accepted


def union_region(ch: ChannelSpec, family=Family.GENERAL_EQ1, samples: Optional[int] = None,
                 seed: Optional[int] = None, **kwargs) -> UnionOracle:
    return UnionOracle(ch, family, samples, seed, **kwargs)


# Time sharing

def _pad(table: np.ndarray, size: int, axis: int = -1) -> np.ndarray:
    pad = [(0, 0)] * table.ndim
    pad[axis] = (0, size - table.shape[axis])
    return np.pad(table, pad)


def _pad_rows(table: np.ndarray, size: int) -> np.ndarray:
    """Pad the conditioning axis 1 (auxiliary symbol) with uniform rows."""
    extra = size - table.shape[1]
    if extra == 0:
        return table
    filler = np.full((table.shape[0], extra, table.shape[2]), 1.0 / table.shape[2])
    return np.concatenate([table, filler], axis=1)


def timeshare_factorization(f1: InputFactorization, f2: InputFactorization,
                            alpha: float) -> InputFactorization:
    """
    GENERAL_EQ1 factorization mixing f1 (weight alpha) and f2 (1 - alpha).

    The common variable runs over the disjoint union of both U0 alphabets,
    so it carries the time-sharing tag. Auxiliary alphabets are padded to
    the larger cardinality with never-used symbols.
    """
    if not 0.0 <= alpha <= 1.0:
        raise UsageError(f"alpha must lie in [0, 1], got {alpha}")
    for f in (f1, f2):
        if f.family is not Family.GENERAL_EQ1:
            raise UsageError(f"Time sharing needs GENERAL_EQ1 factorizations, got {f.family.value}")
    for name in ('X1', 'X2'):
        if f1.card(name) != f2.card(name):
            raise ValidationError(f"{name} alphabets differ: {f1.card(name)} vs {f2.card(name)}")

    c1 = max(f1.card('U1'), f2.card('U1'))
    c2 = max(f1.card('U2'), f2.card('U2'))
    t1, t2 = f1.tables, f2.tables
    tables = {
        'U0': np.concatenate([alpha * t1['U0'], (1.0 - alpha) * t2['U0']]),
        'U1': np.concatenate([_pad(t1['U1'], c1), _pad(t2['U1'], c1)]),
        'U2': np.concatenate([_pad(t1['U2'], c2), _pad(t2['U2'], c2)]),
        'X1': np.concatenate([_pad_rows(t1['X1'], c1), _pad_rows(t2['X1'], c1)]),
        'X2': np.concatenate([_pad_rows(t1['X2'], c2), _pad_rows(t2['X2'], c2)]),
    }
    return InputFactorization(Family.GENERAL_EQ1, tables)


@dataclass
class TimeshareFailure:
    index: int
    combined: Tuple[float, ...]
    violated: List[str]


@dataclass
class TimeshareReport:
    alpha: float
    checked: int
    augmented: InputFactorization
    failures: List[TimeshareFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def timeshare_check(f1: InputFactorization, f2: InputFactorization, alpha: float, ch: ChannelSpec,
                    points: Optional[Sequence[Tuple[np.ndarray, np.ndarray]]] = None,
                    count: int = 200, seed: Optional[int] = None,
                    tol: Optional[float] = None) -> TimeshareReport:
    """
    Check that alpha * r1 + (1 - alpha) * r2 lies in the split-rate region
    of the time-shared factorization.

    Args:
        points: (r1, r2) pairs of quintuples over (R0, R12, R11, R21, R22);
            sampled from the two regions when omitted
        count: number of sampled pairs when points is omitted

    Raises:
        ValidationError: if a supplied r1 or r2 is outside its own region
    """
    config = get_config()
    tol = config.member_tol if tol is None else tol
    region_1 = implicit_region(induce_joint(f1, ch))
    region_2 = implicit_region(induce_joint(f2, ch))
    augmented = timeshare_factorization(f1, f2, alpha)
    region = implicit_region(induce_joint(augmented, ch))

    if points is None:
        rng = np.random.default_rng(config.seed if seed is None else seed)
        r1 = sample_members(region_1, count, rng)
        r2 = sample_members(region_2, count, rng)
    else:
        r1 = np.array([_as_vector(a) for a, _ in points]).reshape(-1, len(SPLIT_COORDS))
        r2 = np.array([_as_vector(b) for _, b in points]).reshape(-1, len(SPLIT_COORDS))
        for name, pts, reg in (('r1', r1, region_1), ('r2', r2, region_2)):
            outside = np.flatnonzero(~member_many(reg, pts, tol))
            if len(outside):
                raise ValidationError(f"Pair {int(outside[0])}: {name} is not in its own region")

    combined = alpha * r1 + (1.0 - alpha) * r2
    inside = member_many(region, combined, tol)
    failures = []
    for i in np.flatnonzero(~inside):
        slack = region.b - region.A @ combined[i]
        violated = [region.labels[k] for k in np.flatnonzero(slack < -tol)]
        failures.append(TimeshareFailure(int(i), tuple(float(v) for v in combined[i]), violated))
    if failures:
        logging.warning(f"Time sharing at alpha={alpha}: {len(failures)} of {len(combined)} combinations failed")
    return TimeshareReport(alpha, len(combined), augmented, failures)


def _as_vector(r) -> np.ndarray:
    if isinstance(r, RatePoint):
        return r.vector(SPLIT_COORDS)
    return np.asarray(r, dtype=float)
