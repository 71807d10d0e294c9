"""Compiled and NumPy kernel backends must agree bit for bit."""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from gaugelab import kernels
from gaugelab.algebra import gauge_group, structure_constants
from gaugelab.kernels import reference
from gaugelab.lattice import LatticeGeometry, kernel_tables

GROUPS = ("U1", "SU2", "SU3")

compiled = kernels.available_backends().get("compiled")
needs_compiled = pytest.mark.skipif(
    compiled is None, reason="compiled extension not built"
)


def _random_fields(geometry, group, seed):
    rng = np.random.Generator(np.random.Philox(seed))
    shape = (geometry.n_sites, geometry.spatial_dim, group.dim)
    A = rng.normal(0.0, 0.3, size=shape)
    E = rng.normal(0.0, 0.3, size=shape)
    return np.ascontiguousarray(A), np.ascontiguousarray(E)


def _setup(kind: str, extent=(6, 8), seed=11):
    group = gauge_group(kind)
    sc = structure_constants(group)
    geometry = LatticeGeometry(extent)
    tables = kernel_tables(geometry, sc)
    A, E = _random_fields(geometry, group, seed)
    return A, E, tables


def test_backend_name_is_known():
    assert kernels.backend_name() in ("compiled", "numpy")


def test_numpy_backend_always_available():
    backends = kernels.available_backends()
    assert backends["numpy"] is reference
    for mod in backends.values():
        for fn in ("field_strength", "eom_rhs", "gauss", "leapfrog_steps"):
            assert callable(getattr(mod, fn))


def test_active_backend_prefers_compiled():
    if os.environ.get("GAUGELAB_PURE") == "1":
        assert kernels.backend_name() == "numpy"
    elif compiled is not None:
        assert kernels.backend_name() == "compiled"


@needs_compiled
@pytest.mark.parametrize("kind", GROUPS)
def test_pointwise_kernels_bitwise(kind):
    A, E, tables = _setup(kind)
    for g in (0.0, 1.3):
        assert np.array_equal(
            compiled.field_strength(A, g, tables),
            reference.field_strength(A, g, tables),
        )
        assert np.array_equal(
            compiled.eom_rhs(A, g, tables), reference.eom_rhs(A, g, tables)
        )
        assert np.array_equal(
            compiled.gauss(A, E, g, tables), reference.gauss(A, E, g, tables)
        )


@needs_compiled
@pytest.mark.parametrize("kind", GROUPS)
def test_leapfrog_bitwise(kind):
    A, E, tables = _setup(kind)
    Ac, Ec = A.copy(), E.copy()
    An, En = A.copy(), E.copy()
    rc = compiled.leapfrog_steps(Ac, Ec, 200, 0.02, 1.1, tables)
    rn = reference.leapfrog_steps(An, En, 200, 0.02, 1.1, tables)
    assert rc == rn == -1
    assert np.array_equal(Ac, An)
    assert np.array_equal(Ec, En)


@needs_compiled
def test_leapfrog_bitwise_3d():
    A, E, tables = _setup("SU2", extent=(4, 4, 4), seed=3)
    Ac, Ec = A.copy(), E.copy()
    An, En = A.copy(), E.copy()
    assert compiled.leapfrog_steps(Ac, Ec, 100, 0.02, 2.0, tables) == -1
    assert reference.leapfrog_steps(An, En, 100, 0.02, 2.0, tables) == -1
    assert np.array_equal(Ac, An)
    assert np.array_equal(Ec, En)


@needs_compiled
@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_blowup_step_index_matches():
    A, E, tables = _setup("SU2", seed=7)
    A *= 10.0
    Ac, Ec = A.copy(), E.copy()
    An, En = A.copy(), E.copy()
    rc = compiled.leapfrog_steps(Ac, Ec, 400, 0.09, 5.0, tables)
    rn = reference.leapfrog_steps(An, En, 400, 0.09, 5.0, tables)
    assert rc == rn
    assert rc >= 0  # this run is meant to leave the stable region


def test_reference_chunks_compose():
    A, E, tables = _setup("SU3", seed=19)
    A1, E1 = A.copy(), E.copy()
    assert reference.leapfrog_steps(A1, E1, 90, 0.02, 1.0, tables) == -1
    A2, E2 = A.copy(), E.copy()
    assert reference.leapfrog_steps(A2, E2, 50, 0.02, 1.0, tables) == -1
    assert reference.leapfrog_steps(A2, E2, 40, 0.02, 1.0, tables) == -1
    assert np.array_equal(A1, A2)
    assert np.array_equal(E1, E2)


def test_pure_env_forces_numpy():
    env = dict(os.environ, GAUGELAB_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from gaugelab import kernels; print(kernels.backend_name())"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "numpy"
