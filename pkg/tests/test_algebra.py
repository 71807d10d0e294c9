"""Structure-constant tables and Lie-algebra helpers.

The su(3) table is checked entrywise against an oracle computed from the
standard generator matrices, f_abc = -2i Tr([T_a, T_b] T_c) with
T_a normalized to Tr(T_a T_b) = delta_ab / 2.
"""

from __future__ import annotations

import numpy as np
import pytest

from gaugelab import (
    SU2,
    SU3,
    U1,
    GroupKind,
    LieAlgebraElement,
    commutator,
    gauge_group,
    lie_inner,
    structure_constants,
)


def _gell_mann():
    l1 = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    l2 = [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]
    l3 = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
    l4 = [[0, 0, 1], [0, 0, 0], [1, 0, 0]]
    l5 = [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]
    l6 = [[0, 0, 0], [0, 0, 1], [0, 1, 0]]
    l7 = [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]
    s3 = 1.0 / np.sqrt(3.0)
    l8 = [[s3, 0, 0], [0, s3, 0], [0, 0, -2 * s3]]
    return [np.array(m, dtype=complex) for m in (l1, l2, l3, l4, l5, l6, l7, l8)]


def _pauli():
    sx = [[0, 1], [1, 0]]
    sy = [[0, -1j], [1j, 0]]
    sz = [[1, 0], [0, -1]]
    return [np.array(m, dtype=complex) for m in (sx, sy, sz)]


def _table_from_generators(lams):
    n = len(lams)
    gens = [m / 2.0 for m in lams]
    f = np.zeros((n, n, n))
    max_imag = 0.0
    for a in range(n):
        for b in range(n):
            comm = gens[a] @ gens[b] - gens[b] @ gens[a]
            for c in range(n):
                val = -2j * np.trace(comm @ gens[c])
                max_imag = max(max_imag, abs(val.imag))
                f[a, b, c] = val.real
    assert max_imag < 1e-14
    return f


def test_u1_table_is_empty():
    sc = structure_constants(U1)
    assert sc.dense.shape == (1, 1, 1)
    assert np.all(sc.dense == 0.0)
    assert len(sc.entry_arrays[0]) == 0


def test_su2_matches_levi_civita():
    sc = structure_constants(SU2)
    eps = np.zeros((3, 3, 3))
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[a, b, c] = 1.0
        eps[b, a, c] = -1.0
    assert np.array_equal(sc.dense, eps)


def test_su2_matches_generator_oracle():
    oracle = _table_from_generators(_pauli())
    assert np.max(np.abs(structure_constants(SU2).dense - oracle)) < 1e-13


def test_su3_matches_generator_oracle():
    oracle = _table_from_generators(_gell_mann())
    assert np.max(np.abs(structure_constants(SU3).dense - oracle)) < 1e-13


@pytest.mark.parametrize("group", [SU2, SU3])
def test_antisymmetry(group):
    f = structure_constants(group).dense
    assert np.max(np.abs(f + np.swapaxes(f, 0, 1))) <= 1e-12
    assert np.max(np.abs(f + np.swapaxes(f, 1, 2))) <= 1e-12


@pytest.mark.parametrize("group", [SU2, SU3])
def test_jacobi_identity(group):
    f = structure_constants(group).dense
    # f_abe f_ecd + f_cbe f_aed + f_dbe f_ace = 0 for all (a, b, c, d)
    term1 = np.einsum("abe,ecd->abcd", f, f)
    term2 = np.einsum("cbe,aed->abcd", f, f)
    term3 = np.einsum("dbe,ace->abcd", f, f)
    assert np.max(np.abs(term1 + term2 + term3)) <= 1e-12


def test_entry_arrays_match_dense():
    for group in (SU2, SU3):
        sc = structure_constants(group)
        dense = np.zeros_like(sc.dense)
        fa, fb, fc, fv = sc.entry_arrays
        for a, b, c, v in zip(fa, fb, fc, fv):
            dense[a, b, c] = v
        assert np.array_equal(dense, sc.dense)


def test_tables_are_locked():
    sc = structure_constants(SU3)
    with pytest.raises(ValueError):
        sc.dense[0, 0, 0] = 1.0
    fa, _, _, fv = sc.entry_arrays
    with pytest.raises(ValueError):
        fa[0] = 5
    with pytest.raises(ValueError):
        fv[0] = 5.0


def test_gauge_group_lookup():
    assert gauge_group("SU2") == SU2
    assert gauge_group(GroupKind.SU3) == SU3
    assert gauge_group("U1").dim == 1
    assert SU2.dim == 3 and SU3.dim == 8
    with pytest.raises(ValueError):
        gauge_group("SO3")


def test_commutator_jacobi_on_vectors():
    rng = np.random.Generator(np.random.Philox(key=3))
    sc = structure_constants(SU3)
    x, y, z = (
        LieAlgebraElement(SU3, rng.standard_normal(8)) for _ in range(3)
    )
    total = (
        commutator(x, commutator(y, z, sc), sc).comp
        + commutator(y, commutator(z, x, sc), sc).comp
        + commutator(z, commutator(x, y, sc), sc).comp
    )
    assert np.max(np.abs(total)) < 1e-12


def test_lie_inner_ad_invariance():
    rng = np.random.Generator(np.random.Philox(key=4))
    sc = structure_constants(SU2)
    x, y, z = (
        LieAlgebraElement(SU2, rng.standard_normal(3)) for _ in range(3)
    )
    lhs = lie_inner(commutator(z, x, sc), y)
    rhs = -lie_inner(x, commutator(z, y, sc))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_commutator_group_mismatch():
    sc = structure_constants(SU2)
    x = LieAlgebraElement(SU2, np.zeros(3))
    y = LieAlgebraElement(SU3, np.zeros(8))
    with pytest.raises(ValueError):
        commutator(x, y, sc)
