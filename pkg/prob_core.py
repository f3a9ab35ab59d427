#!/usr/bin/env python3
"""
Probability Core Module for icckit

Handles finite joint probability tables over named variables and the
Shannon measures (entropy, conditional entropy, conditional mutual
information) every rate region is built from. All logs are base 2.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import get_config
from errors import UsageError, ValidationError

# Values of I(A;B|C) in (-MI_CLAMP, 0) are floating-point noise.
MI_CLAMP = 1e-12

_LETTERS = 'abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ'


@dataclass(frozen=True)
class VarId:
    """A named finite random variable."""
    name: str
    cardinality: int

    def __post_init__(self):
        if not self.name:
            raise ValidationError("Variable name cannot be empty")
        if int(self.cardinality) < 1:
            raise ValidationError(f"Variable {self.name}: cardinality must be >= 1, got {self.cardinality}")


VarLike = Union[str, VarId]


def _name(v: VarLike) -> str:
    return v.name if isinstance(v, VarId) else str(v)


def _names(vs: Union[VarLike, Iterable[VarLike], None]) -> List[str]:
    if vs is None:
        return []
    if isinstance(vs, (str, VarId)):
        return [_name(vs)]
    return [_name(v) for v in vs]


class JointPmf:
    """
    Immutable probability table over an ordered tuple of variables.

    The mass array has one axis per variable, in declaration order.
    """

    __slots__ = ('vars', 'mass', '_index', '_entropy_cache')

    def __init__(self, vars: Sequence[VarId], mass, validate: bool = True, tol: Optional[float] = None):
        vars = tuple(vars)
        names = [v.name for v in vars]
        if len(set(names)) != len(names):
            raise ValidationError(f"Duplicate variable names in joint: {names}")

        shape = tuple(int(v.cardinality) for v in vars)
        mass = np.array(mass, dtype=float)
        if mass.size != int(np.prod(shape, dtype=np.int64)):
            raise ValidationError(
                f"Table size {mass.size} does not match cardinalities {shape} of {names}")
        mass = mass.reshape(shape)

        if validate:
            tol = get_config().pmf_tol if tol is None else tol
            if not np.all(np.isfinite(mass)):
                raise ValidationError("Joint table contains non-finite entries")
            negative = np.argwhere(mass < 0)
            if len(negative):
                index = tuple(int(i) for i in negative[0])
                raise ValidationError(f"Negative probability {mass[index]} at index {index} of {names}")
            total = float(mass.sum())
            if abs(total - 1.0) > tol:
                raise ValidationError(f"Joint table over {names} sums to {total:.12g}, not 1")

        mass.flags.writeable = False
        self.vars = vars
        self.mass = mass
        self._index = {name: i for i, name in enumerate(names)}
        self._entropy_cache: Dict[frozenset, float] = {}

    def __repr__(self):
        return f"JointPmf({', '.join(f'{v.name}:{v.cardinality}' for v in self.vars)})"

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def var(self, name: VarLike) -> VarId:
        return self.vars[self.axis(name)]

    def axis(self, name: VarLike) -> int:
        key = _name(name)
        if key not in self._index:
            raise UsageError(f"Unknown variable {key}; joint has {', '.join(self.names)}")
        return self._index[key]

    def axes(self, names) -> Tuple[int, ...]:
        return tuple(self.axis(n) for n in _names(names))

    def rename(self, mapping: Dict[str, str]) -> 'JointPmf':
        """Same table with variables renamed (e.g. Q to U0)."""
        for old in mapping:
            self.axis(old)
        vars = [VarId(mapping.get(v.name, v.name), v.cardinality) for v in self.vars]
        return JointPmf(vars, self.mass, validate=False)

    def permute(self, order) -> 'JointPmf':
        """Same distribution with axes reordered to `order` (must list every variable)."""
        order = _names(order)
        if sorted(order) != sorted(self.names):
            raise UsageError(f"Permutation {order} must list exactly {list(self.names)}")
        axes = self.axes(order)
        return JointPmf([self.vars[a] for a in axes], np.transpose(self.mass, axes), validate=False)


def marginalize(p: JointPmf, keep) -> JointPmf:
    """
    Sum the mass over every variable not in `keep`.

    Args:
        p: joint distribution
        keep: variable names (or VarIds) to retain

    Returns:
        JointPmf: marginal over the kept variables in their original order
    """
    keep_axes = set(p.axes(keep))
    if len(keep_axes) == len(p.vars):
        return p
    drop = tuple(a for a in range(len(p.vars)) if a not in keep_axes)
    mass = p.mass.sum(axis=drop)
    vars = [v for a, v in enumerate(p.vars) if a in keep_axes]
    return JointPmf(vars, mass, validate=False)


def entropy(p: JointPmf, vars) -> float:
    """Entropy in bits of the marginal on `vars`; the empty set has entropy 0."""
    axes = frozenset(p.axes(vars))
    if not axes:
        return 0.0
    cached = p._entropy_cache.get(axes)
    if cached is not None:
        return cached

    drop = tuple(a for a in range(len(p.vars)) if a not in axes)
    marginal = p.mass.sum(axis=drop) if drop else p.mass
    nz = marginal[marginal > 0]
    value = float(-(nz * np.log2(nz)).sum())
    p._entropy_cache[axes] = value
    return value


def conditional_entropy(p: JointPmf, a, c=()) -> float:
    """H(A|C) = H(AC) - H(C)."""
    a_names, c_names = _names(a), _names(c)
    _check_disjoint(a=a_names, c=c_names)
    value = entropy(p, a_names + c_names) - entropy(p, c_names)
    return 0.0 if -MI_CLAMP < value < 0 else value


def cond_mutual_info(p: JointPmf, a, b, c=()) -> float:
    """
    Conditional mutual information I(A;B|C) in bits.

    Computed as H(AC) + H(BC) - H(ABC) - H(C). Results in (-1e-12, 0) are
    reported as 0.

    Raises:
        UsageError: if the groups overlap or name unknown variables
    """
    a_names, b_names, c_names = _names(a), _names(b), _names(c)
    if not a_names or not b_names:
        raise UsageError("cond_mutual_info needs non-empty A and B groups")
    _check_disjoint(a=a_names, b=b_names, c=c_names)

    value = (entropy(p, a_names + c_names) + entropy(p, b_names + c_names)
             - entropy(p, a_names + b_names + c_names) - entropy(p, c_names))
    if value < 0:
        if value > -MI_CLAMP:
            return 0.0
        logging.warning(f"I({a_names};{b_names}|{c_names}) evaluated to {value:.3e}")
    return value


def mutual_info(p: JointPmf, a, b) -> float:
    return cond_mutual_info(p, a, b, ())


def _check_disjoint(**groups):
    seen = {}
    for label, names in groups.items():
        if len(set(names)) != len(names):
            raise UsageError(f"Group {label} repeats a variable: {names}")
        for name in names:
            if name in seen:
                raise UsageError(f"Variable {name} appears in both groups {seen[name]} and {label}")
            seen[name] = label


@dataclass(frozen=True, eq=False)
class Factor:
    """
    Conditional table p(targets | given).

    The table has one axis per given variable (in order) followed by one
    axis per target variable.
    """
    targets: Tuple[VarId, ...]
    given: Tuple[VarId, ...]
    table: np.ndarray

    @classmethod
    def of(cls, target, given, table) -> 'Factor':
        targets = (target,) if isinstance(target, VarId) else tuple(target)
        return cls(targets, tuple(given), np.asarray(table, dtype=float))

    @property
    def label(self) -> str:
        lhs = ','.join(v.name for v in self.targets)
        if not self.given:
            return lhs
        return f"{lhs}|{','.join(v.name for v in self.given)}"


def _check_factor(factor: Factor, tol: float):
    shape = tuple(v.cardinality for v in factor.given) + tuple(v.cardinality for v in factor.targets)
    table = factor.table
    if table.size != int(np.prod(shape, dtype=np.int64)):
        raise ValidationError(f"Factor {factor.label}: table shape {table.shape} does not match {shape}")
    table = table.reshape(shape)

    negative = np.argwhere(table < 0)
    if len(negative) or not np.all(np.isfinite(table)):
        index = tuple(int(i) for i in negative[0]) if len(negative) else ()
        raise ValidationError(f"Factor {factor.label}: invalid entry at index {index}")

    n_given = len(factor.given)
    row_sums = table.sum(axis=tuple(range(n_given, table.ndim)))
    bad = np.argwhere(np.abs(row_sums - 1.0) > tol)
    if len(bad):
        row = tuple(int(i) for i in bad[0])
        where = ', '.join(f"{v.name}={i}" for v, i in zip(factor.given, row)) or 'unconditional'
        raise ValidationError(
            f"Factor {factor.label}: row ({where}) sums to {float(row_sums[tuple(row)]):.12g}, not 1")
    return table


def extend(p: Optional[JointPmf], factor: Factor, tol: Optional[float] = None) -> JointPmf:
    """Multiply a joint by one more conditional factor, appending its targets."""
    tol = get_config().pmf_tol if tol is None else tol
    table = _check_factor(factor, tol)

    vars = list(p.vars) if p is not None else []
    mass = p.mass if p is not None else np.ones(())
    declared = {v.name: v for v in vars}

    for v in factor.given:
        if v.name not in declared:
            raise ValidationError(f"Factor {factor.label} conditions on undeclared variable {v.name}")
        if declared[v.name].cardinality != v.cardinality:
            raise ValidationError(
                f"Factor {factor.label}: {v.name} has cardinality {v.cardinality}, "
                f"declared {declared[v.name].cardinality}")
    for v in factor.targets:
        if v.name in declared:
            raise ValidationError(f"Factor {factor.label} redeclares variable {v.name}")

    all_names = [v.name for v in vars] + [v.name for v in factor.targets]
    if len(all_names) > len(_LETTERS):
        raise UsageError(f"Too many variables ({len(all_names)}) in one joint")
    letter = {name: _LETTERS[i] for i, name in enumerate(all_names)}
    lhs = ''.join(letter[v.name] for v in vars)
    rhs = ''.join(letter[v.name] for v in factor.given + factor.targets)
    out = ''.join(letter[n] for n in all_names)
    new_mass = np.einsum(f"{lhs},{rhs}->{out}", mass, table)
    return JointPmf(vars + list(factor.targets), new_mass, validate=False)


def compose_factors(factors: Sequence) -> JointPmf:
    """
    Build the product-form joint of a chain of conditional factors.

    Args:
        factors: Factor objects or (target, given, table) tuples, each
            conditioning only on variables declared by earlier factors

    Returns:
        JointPmf: joint over every declared variable in declaration order

    Raises:
        ValidationError: on non-normalized rows, undeclared parents or
            inconsistent cardinalities
    """
    if not factors:
        raise UsageError("compose_factors needs at least one factor")
    joint = None
    for factor in factors:
        if not isinstance(factor, Factor):
            factor = Factor.of(*factor)
        joint = extend(joint, factor)
    return JointPmf(joint.vars, joint.mass)


def deterministic_factor(target: VarId, given: Sequence[VarId], mapping) -> Factor:
    """Indicator factor for target = mapping[given...]."""
    mapping = np.asarray(mapping, dtype=int)
    shape = tuple(v.cardinality for v in given)
    mapping = mapping.reshape(shape)
    if mapping.size and (mapping.min() < 0 or mapping.max() >= target.cardinality):
        bad = np.argwhere((mapping < 0) | (mapping >= target.cardinality))[0]
        raise ValidationError(
            f"Map to {target.name} has out-of-range value {int(mapping[tuple(bad)])} at index {tuple(int(i) for i in bad)}")
    table = np.zeros(shape + (target.cardinality,))
    np.put_along_axis(table, mapping[..., None], 1.0, axis=-1)
    return Factor((target,), tuple(given), table)


def random_pmf(rng: np.random.Generator, vars: Sequence[VarId]) -> JointPmf:
    """Joint drawn uniformly from the probability simplex."""
    shape = tuple(v.cardinality for v in vars)
    mass = rng.dirichlet(np.ones(int(np.prod(shape, dtype=np.int64)))).reshape(shape)
    return JointPmf(vars, mass)
