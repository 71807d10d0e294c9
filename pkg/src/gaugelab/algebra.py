"""Real-coefficient arithmetic in the adjoint-component basis of u(1), su(2), su(3).

Elements are stored as real component vectors X^a against a basis {e_a} that
is orthonormal under the Euclidean color inner product, with the bracket
convention

    [e_a, e_b] = sum_c f_abc e_c

and totally antisymmetric real structure constants f_abc.  No factor of i and
no complex matrices appear anywhere: all field arithmetic downstream stays
real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np


class GroupKind(Enum):
    U1 = "U1"
    SU2 = "SU2"
    SU3 = "SU3"


_COLOR_DIM = {GroupKind.U1: 1, GroupKind.SU2: 3, GroupKind.SU3: 8}


@dataclass(frozen=True)
class GaugeGroup:
    kind: GroupKind
    dim: int

    def __post_init__(self):
        expected = _COLOR_DIM[self.kind]
        if self.dim != expected:
            raise ValueError(
                f"color dimension for {self.kind.value} must be {expected}, "
                f"got {self.dim}"
            )


def gauge_group(kind: GroupKind | str) -> GaugeGroup:
    """Return the gauge group for `kind` with its canonical color dimension."""
    if isinstance(kind, str):
        kind = GroupKind(kind)
    return GaugeGroup(kind, _COLOR_DIM[kind])


U1 = gauge_group(GroupKind.U1)
SU2 = gauge_group(GroupKind.SU2)
SU3 = gauge_group(GroupKind.SU3)

# Independent su(3) constants over the canonical antisymmetric basis,
# 0-based indices; the full table is generated by antisymmetric completion.
_SU3_BASE = (
    (0, 1, 2, 1.0),
    (0, 3, 6, 0.5),
    (0, 4, 5, -0.5),
    (1, 3, 5, 0.5),
    (1, 4, 6, 0.5),
    (2, 3, 4, 0.5),
    (2, 5, 6, -0.5),
    (3, 4, 7, math.sqrt(3.0) / 2.0),
    (5, 6, 7, math.sqrt(3.0) / 2.0),
)

_SU2_BASE = ((0, 1, 2, 1.0),)

# (permutation, parity) pairs of three indices
_PERMS = (
    ((0, 1, 2), 1.0),
    ((1, 2, 0), 1.0),
    ((2, 0, 1), 1.0),
    ((1, 0, 2), -1.0),
    ((0, 2, 1), -1.0),
    ((2, 1, 0), -1.0),
)


def _expand_antisymmetric(base):
    table = []
    for a, b, c, v in base:
        idx = (a, b, c)
        for perm, sign in _PERMS:
            table.append((idx[perm[0]], idx[perm[1]], idx[perm[2]], sign * v))
    table.sort()
    return tuple(table)


@dataclass(frozen=True)
class StructureConstants:
    """Sparse table of all nonzero f_abc entries for one gauge group.

    `table` holds every nonzero (a, b, c, f_abc) with 0-based color indices;
    antisymmetric partners are stored explicitly, so lookups need no sign
    bookkeeping.
    """

    group: GaugeGroup
    table: tuple

    @cached_property
    def dense(self) -> np.ndarray:
        """Dense (dim, dim, dim) array with dense[a, b, c] = f_abc."""
        d = self.group.dim
        f = np.zeros((d, d, d))
        for a, b, c, v in self.table:
            f[a, b, c] = v
        f.flags.writeable = False
        return f

    @cached_property
    def entry_arrays(self):
        """Sparse entries as (a, b, c, value) numpy arrays for the kernels."""
        n = len(self.table)
        a = np.zeros(n, dtype=np.int32)
        b = np.zeros(n, dtype=np.int32)
        c = np.zeros(n, dtype=np.int32)
        v = np.zeros(n, dtype=np.float64)
        for t, (ai, bi, ci, vi) in enumerate(self.table):
            a[t], b[t], c[t], v[t] = ai, bi, ci, vi
        for arr in (a, b, c, v):
            arr.flags.writeable = False
        return a, b, c, v


def structure_constants(group: GaugeGroup) -> StructureConstants:
    """Canonical structure constants: empty for U1, Levi-Civita for su(2),
    the standard totally antisymmetric constants for su(3)."""
    if group.kind is GroupKind.U1:
        return StructureConstants(group, ())
    if group.kind is GroupKind.SU2:
        return StructureConstants(group, _expand_antisymmetric(_SU2_BASE))
    return StructureConstants(group, _expand_antisymmetric(_SU3_BASE))


@dataclass(frozen=True, eq=False)
class LieAlgebraElement:
    group: GaugeGroup
    comp: np.ndarray

    def __post_init__(self):
        comp = np.asarray(self.comp, dtype=np.float64)
        if comp.shape != (self.group.dim,):
            raise ValueError(
                f"component vector must have length {self.group.dim}, "
                f"got shape {comp.shape}"
            )
        object.__setattr__(self, "comp", comp)


def zero_element(group: GaugeGroup) -> LieAlgebraElement:
    return LieAlgebraElement(group, np.zeros(group.dim))


def basis_element(group: GaugeGroup, a: int) -> LieAlgebraElement:
    comp = np.zeros(group.dim)
    comp[a] = 1.0
    return LieAlgebraElement(group, comp)


def _require_same_group(*items):
    groups = {item.group for item in items}
    if len(groups) != 1:
        raise ValueError(f"gauge group mismatch: {sorted(g.kind.value for g in groups)}")


def commutator(
    X: LieAlgebraElement, Y: LieAlgebraElement, sc: StructureConstants
) -> LieAlgebraElement:
    """[X, Y] in components: result_c = sum_ab f_abc X^a Y^b.

    Bilinear and antisymmetric; the coupling constant is applied by callers.
    """
    _require_same_group(X, Y, sc)
    comp = np.einsum("abc,a,b->c", sc.dense, X.comp, Y.comp)
    return LieAlgebraElement(X.group, comp)


def lie_inner(X: LieAlgebraElement, Y: LieAlgebraElement) -> float:
    """Euclidean color inner product sum_a X^a Y^a."""
    _require_same_group(X, Y)
    return float(np.dot(X.comp, Y.comp))
