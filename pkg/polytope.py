#!/usr/bin/env python3
"""
Polytope Module for icckit

Handles linear inequality systems over named rate coordinates:
membership, Fourier-Motzkin projection, LP-based redundancy pruning and
grid evaluation.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog

from config import get_config
from errors import UsageError, ValidationError


@dataclass(frozen=True, eq=False)
class IneqSystem:
    """
    Rows A @ r <= b over the coordinates `coords`.

    `nonneg[j]` marks coordinates that are implicitly >= 0. Row labels are
    free-form tags (bound expressions, "fm3") used in reports.
    """
    coords: Tuple[str, ...]
    A: np.ndarray
    b: np.ndarray
    nonneg: Tuple[bool, ...] = ()
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        coords = tuple(str(c) for c in self.coords)
        if not coords:
            raise ValidationError("An inequality system needs at least one coordinate")
        if len(set(coords)) != len(coords):
            raise ValidationError(f"Duplicate coordinates: {list(coords)}")

        A = np.array(self.A, dtype=float).reshape(-1, len(coords))
        b = np.array(self.b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise ValidationError(f"{A.shape[0]} coefficient rows but {b.shape[0]} right-hand sides")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            bad = np.argwhere(~np.isfinite(np.column_stack([A, b])))[0][0]
            raise ValidationError(f"Row {int(bad)} has a non-finite entry")

        nonneg = tuple(bool(x) for x in self.nonneg) if self.nonneg else (True,) * len(coords)
        if len(nonneg) != len(coords):
            raise ValidationError(f"{len(nonneg)} nonnegativity flags for {len(coords)} coordinates")
        labels = tuple(self.labels) if self.labels else tuple(f"r{i + 1}" for i in range(len(b)))
        if len(labels) != len(b):
            raise ValidationError(f"{len(labels)} labels for {len(b)} rows")

        A.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, 'coords', coords)
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'nonneg', nonneg)
        object.__setattr__(self, 'labels', labels)

    @classmethod
    def from_rows(cls, coords: Sequence[str], rows: Iterable, nonneg=True) -> 'IneqSystem':
        """
        Build from rows given as (coefficients, rhs) or (coefficients, rhs, label).

        Coefficients may be a list aligned with `coords` or a mapping
        from coordinate name to coefficient.
        """
        coords = tuple(coords)
        A, b, labels = [], [], []
        for i, row in enumerate(rows):
            coeffs, rhs = row[0], row[1]
            label = row[2] if len(row) > 2 else f"r{i + 1}"
            A.append(_coefficients(coords, coeffs))
            b.append(float(rhs))
            labels.append(label)
        flags = (bool(nonneg),) * len(coords) if isinstance(nonneg, bool) else tuple(nonneg)
        return cls(coords, np.array(A).reshape(-1, len(coords)), np.array(b), flags, tuple(labels))

    def __len__(self):
        return len(self.b)

    def index(self, coord: str) -> int:
        try:
            return self.coords.index(coord)
        except ValueError:
            raise UsageError(f"Unknown coordinate {coord}; system has {', '.join(self.coords)}")

    def with_rows(self, A, b, labels: Sequence[str]) -> 'IneqSystem':
        A = np.vstack([self.A, np.asarray(A, dtype=float).reshape(-1, len(self.coords))])
        b = np.concatenate([self.b, np.asarray(b, dtype=float).reshape(-1)])
        return IneqSystem(self.coords, A, b, self.nonneg, self.labels + tuple(labels))

    def add_coords(self, names: Sequence[str], nonneg: bool = True) -> 'IneqSystem':
        """Append new coordinates with zero coefficients in every existing row."""
        for name in names:
            if name in self.coords:
                raise UsageError(f"Coordinate {name} already present")
        A = np.hstack([self.A, np.zeros((len(self.b), len(names)))])
        return IneqSystem(self.coords + tuple(names), A, self.b,
                          self.nonneg + (nonneg,) * len(names), self.labels)

    def with_equality(self, coeffs, rhs: float, label: str = 'eq') -> 'IneqSystem':
        """Add coeffs . r = rhs as two opposing inequalities."""
        row = _coefficients(self.coords, coeffs)
        return self.with_rows([row, -row], [rhs, -rhs], [f"{label}+", f"{label}-"])

    def reorder(self, coords: Sequence[str]) -> 'IneqSystem':
        coords = tuple(coords)
        if sorted(coords) != sorted(self.coords):
            raise UsageError(f"Cannot reorder {list(self.coords)} as {list(coords)}")
        order = [self.index(c) for c in coords]
        return IneqSystem(coords, self.A[:, order], self.b,
                          tuple(self.nonneg[i] for i in order), self.labels)

    def slice(self, fixed: Mapping[str, float]) -> 'IneqSystem':
        """Substitute fixed values for some coordinates and drop them."""
        drop = [self.index(c) for c in fixed]
        keep = [j for j in range(len(self.coords)) if j not in drop]
        b = self.b - sum(self.A[:, self.index(c)] * float(v) for c, v in fixed.items())
        return IneqSystem(tuple(self.coords[j] for j in keep), self.A[:, keep], b,
                          tuple(self.nonneg[j] for j in keep), self.labels)

    def slacks(self, point: 'RatePoint') -> np.ndarray:
        return self.b - self.A @ point.vector(self.coords)

    def describe_row(self, i: int) -> str:
        terms = []
        for coeff, coord in zip(self.A[i], self.coords):
            if coeff == 0:
                continue
            sign = '-' if coeff < 0 else '+'
            mag = abs(coeff)
            term = coord if mag == 1 else f"{mag:.12g} {coord}"
            terms.append(f"{sign} {term}")
        lhs = ' '.join(terms).lstrip('+ ') if terms else '0'
        if lhs.startswith('- '):
            lhs = '-' + lhs[2:]
        return f"{lhs} <= {self.b[i]:.12g}"


def _coefficients(coords: Tuple[str, ...], coeffs) -> np.ndarray:
    if isinstance(coeffs, Mapping):
        unknown = [c for c in coeffs if c not in coords]
        if unknown:
            raise UsageError(f"Unknown coordinates {unknown}; system has {list(coords)}")
        return np.array([float(coeffs.get(c, 0.0)) for c in coords])
    row = np.asarray(coeffs, dtype=float).reshape(-1)
    if row.size != len(coords):
        raise UsageError(f"Row has {row.size} coefficients for {len(coords)} coordinates")
    return row


@dataclass(frozen=True)
class RatePoint:
    """Nonnegative rates in bits per channel use, keyed by coordinate name."""
    coords: Tuple[str, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        if len(self.coords) != len(self.values):
            raise UsageError("RatePoint needs one value per coordinate")
        if len(set(self.coords)) != len(self.coords):
            raise UsageError(f"Duplicate coordinates in point: {list(self.coords)}")
        for c, v in zip(self.coords, self.values):
            if not np.isfinite(v) or v < 0:
                raise ValidationError(f"Rate {c} = {v} must be a finite nonnegative number")

    @classmethod
    def of(cls, mapping: Optional[Mapping[str, float]] = None, **rates) -> 'RatePoint':
        data = dict(mapping or {}, **rates)
        return cls(tuple(data), tuple(float(v) for v in data.values()))

    @classmethod
    def parse(cls, text: str) -> 'RatePoint':
        """Parse "R0=0.1,R1=0.25,R2=0"."""
        data = {}
        for part in text.split(','):
            part = part.strip()
            if not part:
                continue
            if '=' not in part:
                raise UsageError(f"Bad rate '{part}'; expected NAME=VALUE")
            name, value = part.split('=', 1)
            try:
                data[name.strip()] = float(value)
            except ValueError:
                raise UsageError(f"Bad value for {name.strip()}: {value!r}")
        if not data:
            raise UsageError("Empty rate point")
        return cls.of(data)

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(self.coords, self.values))

    def vector(self, coords: Sequence[str]) -> np.ndarray:
        if sorted(coords) != sorted(self.coords):
            raise UsageError(f"Point covers {sorted(self.coords)}, system needs {sorted(coords)}")
        data = self.as_dict()
        return np.array([data[c] for c in coords])


def member(s: IneqSystem, r: RatePoint, tol: Optional[float] = None) -> bool:
    """True iff every row holds within `tol` and every nonnegative coordinate is >= -tol."""
    tol = get_config().member_tol if tol is None else tol
    return bool(member_many(s, r.vector(s.coords)[None, :], tol)[0])


def member_many(s: IneqSystem, points: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Vectorized membership for an (N, k) array whose columns follow s.coords."""
    tol = get_config().member_tol if tol is None else tol
    points = np.asarray(points, dtype=float).reshape(-1, len(s.coords))
    inside = np.all(points @ s.A.T - s.b <= tol, axis=1) if len(s.b) else np.ones(len(points), bool)
    flags = np.array(s.nonneg)
    if flags.any():
        inside &= np.all(points[:, flags] >= -tol, axis=1)
    return inside


def _dedupe(A: np.ndarray, b: np.ndarray, labels: List[str], tol: float):
    """
    Normalize rows by their max-abs coefficient, drop trivial rows and
    keep the tightest copy of rows with identical coefficients.
    """
    kept: Dict[tuple, int] = {}
    rows_A, rows_b, rows_l = [], [], []
    infeasible = None
    for row, rhs, label in zip(A, b, labels):
        scale = np.max(np.abs(row)) if row.size else 0.0
        if scale == 0:
            if rhs < -tol and (infeasible is None or rhs < infeasible):
                infeasible = rhs
            continue
        row = row / scale
        rhs = rhs / scale
        key = tuple(row.tolist())
        if key in kept:
            i = kept[key]
            if rhs < rows_b[i] - tol:
                rows_b[i] = rhs
                rows_l[i] = label
            continue
        kept[key] = len(rows_b)
        rows_A.append(row)
        rows_b.append(rhs)
        rows_l.append(label)
    if infeasible is not None:
        rows_A.append(np.zeros(A.shape[1]))
        rows_b.append(float(infeasible))
        rows_l.append('infeasible')
    A = np.array(rows_A).reshape(-1, A.shape[1])
    return A, np.array(rows_b, dtype=float), rows_l


def fourier_motzkin(s: IneqSystem, eliminate: Sequence[str], tol: Optional[float] = None) -> IneqSystem:
    """
    Project the system onto the coordinates not in `eliminate`.

    Coordinates are eliminated in the given order. The nonnegativity of an
    eliminated coordinate enters as an explicit row before its elimination.

    Returns:
        IneqSystem: membership-equivalent to the projection
    """
    config = get_config()
    tol = config.member_tol if tol is None else tol
    for c in eliminate:
        s.index(c)
    if len(set(eliminate)) == len(s.coords):
        raise UsageError("Cannot eliminate every coordinate")

    coords = list(s.coords)
    nonneg = list(s.nonneg)
    A = s.A.copy()
    b = s.b.copy()
    labels = list(s.labels)

    for name in eliminate:
        j = coords.index(name)
        if nonneg[j]:
            row = np.zeros(len(coords))
            row[j] = -1.0
            A = np.vstack([A, row])
            b = np.append(b, 0.0)
            labels.append(f"{name}>=0")

        col = A[:, j]
        pos = np.flatnonzero(col > 0)
        neg = np.flatnonzero(col < 0)
        zero = np.flatnonzero(col == 0)

        new_A = [A[zero]]
        new_b = [b[zero]]
        new_labels = [labels[i] for i in zero]
        if len(pos) and len(neg):
            # combine every upper bound with every lower bound on coordinate j
            mult_p = -col[neg][None, :, None]
            mult_n = col[pos][:, None, None]
            combos = mult_p * A[pos][:, None, :] + mult_n * A[neg][None, :, :]
            rhs = (mult_p[..., 0] * b[pos][:, None] + mult_n[..., 0] * b[neg][None, :])
            combos[..., j] = 0.0
            new_A.append(combos.reshape(-1, len(coords)))
            new_b.append(rhs.reshape(-1))
            new_labels.extend(f"{labels[p]}*{labels[n]}" for p in pos for n in neg)

        A = np.delete(np.vstack(new_A), j, axis=1)
        b = np.concatenate(new_b)
        labels = new_labels
        del coords[j]
        del nonneg[j]
        A, b, labels = _dedupe(A, b, labels, config.dedup_tol)
        logging.debug(f"Eliminated {name}: {len(b)} rows remain")

    A, b, labels = _dedupe(A, b, labels, config.dedup_tol)
    labels = [label if '*' not in label else f"fm{i + 1}" for i, label in enumerate(labels)]
    return IneqSystem(tuple(coords), A, b, tuple(nonneg), tuple(labels))


def prune(s: IneqSystem, tol: Optional[float] = None) -> IneqSystem:
    """
    Remove rows implied by the remaining rows plus nonnegativity.

    Each row is tested once with a small LP: maximize its left-hand side
    subject to the rows still kept; the row is redundant when the maximum
    does not exceed its rhs.
    """
    config = get_config()
    tol = config.member_tol if tol is None else tol
    A, b, labels = _dedupe(s.A, s.b, list(s.labels), config.dedup_tol)
    if any(label == 'infeasible' for label in labels):
        return IneqSystem(s.coords, A, b, s.nonneg, tuple(labels))

    bounds = [(0, None) if flag else (None, None) for flag in s.nonneg]
    keep = np.ones(len(b), dtype=bool)
    for k in range(len(b)):
        others = keep.copy()
        others[k] = False
        result = linprog(-A[k], A_ub=A[others] if others.any() else None,
                         b_ub=b[others] if others.any() else None,
                         bounds=bounds, method='highs')
        if result.status == 0 and -result.fun <= b[k] + tol:
            keep[k] = False
        elif result.status == 2:
            # the other rows are already infeasible; this row adds nothing
            keep[k] = False
    logging.debug(f"prune: kept {int(keep.sum())} of {len(b)} rows")
    return IneqSystem(s.coords, A[keep], b[keep], s.nonneg,
                      tuple(label for label, flag in zip(labels, keep) if flag))


def _axis_values(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def _bounds_for(coords: Sequence[str], bbox) -> List[Tuple[float, float]]:
    if bbox is None:
        bbox = get_config().bbox
    if isinstance(bbox, Mapping):
        return [tuple(map(float, bbox[c])) for c in coords]
    bbox = list(bbox)
    if len(bbox) == 2 and np.isscalar(bbox[0]):
        return [(float(bbox[0]), float(bbox[1]))] * len(coords)
    if len(bbox) != len(coords):
        raise UsageError(f"Bounding box has {len(bbox)} ranges for {len(coords)} coordinates")
    return [tuple(map(float, r)) for r in bbox]


def grid(coords: Sequence[str], step: float, bbox=None) -> np.ndarray:
    """All grid points of the box in lexicographic order, as an (N, k) array."""
    if step <= 0:
        raise UsageError(f"Grid step must be positive, got {step}")
    axes = [_axis_values(lo, hi, step) for lo, hi in _bounds_for(coords, bbox)]
    mesh = np.meshgrid(*axes, indexing='ij')
    return np.stack([m.ravel() for m in mesh], axis=1)


def grid_points(s: IneqSystem, step: float, bbox=None, tol: Optional[float] = None) -> List[RatePoint]:
    """Grid points of the box that are members of `s`, lexicographically ordered."""
    points = grid(s.coords, step, bbox)
    inside = member_many(s, points, tol)
    return [RatePoint(s.coords, tuple(float(v) for v in row)) for row in points[inside]]


@dataclass
class DiffReport:
    """Grid comparison of two regions over the same coordinates."""
    coords: Tuple[str, ...]
    a_only: int
    b_only: int
    both: int
    total: int

    @property
    def equivalent(self) -> bool:
        return self.a_only == 0 and self.b_only == 0


def grid_diff(a: IneqSystem, b: IneqSystem, step: Optional[float] = None, bbox=None,
              tol: Optional[float] = None) -> DiffReport:
    """Count grid points in A only, B only and both."""
    if sorted(a.coords) != sorted(b.coords):
        raise UsageError(f"Cannot compare regions over {list(a.coords)} and {list(b.coords)}")
    step = get_config().grid_step if step is None else step
    b = b.reorder(a.coords)
    points = grid(a.coords, step, bbox)
    in_a = member_many(a, points, tol)
    in_b = member_many(b, points, tol)
    return DiffReport(a.coords, int(np.sum(in_a & ~in_b)), int(np.sum(in_b & ~in_a)),
                      int(np.sum(in_a & in_b)), len(points))


def sample_members(s: IneqSystem, count: int, rng: np.random.Generator,
                   cap: Optional[float] = None) -> np.ndarray:
    """
    Random member points by shooting rays from the origin along random
    directions in the nonnegative orthant.

    Requires the origin to be a member. `cap` bounds the ray length along
    directions in which the region is unbounded.
    """
    if np.any(s.b < 0):
        raise UsageError("sample_members needs a region containing the origin")
    cap = get_config().bbox[1] if cap is None else cap
    directions = rng.exponential(size=(count, len(s.coords)))
    reach = directions @ s.A.T
    with np.errstate(divide='ignore', invalid='ignore'):
        limits = np.where(reach > 0, s.b[None, :] / reach, np.inf)
    t_max = limits.min(axis=1) if len(s.b) else np.full(count, np.inf)
    t_max = np.minimum(t_max, cap / directions.max(axis=1))
    return directions * (rng.random(count) * t_max)[:, None]
