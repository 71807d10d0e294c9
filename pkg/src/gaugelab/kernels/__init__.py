"""Compute-kernel backend selection.

The compiled Cython core (`gaugelab.kernels._core`) is used when it was built;
otherwise the pure-NumPy reference implementation takes over.  Both expose the
same four entry points with identical semantics (see `reference` for the
contract).  Set GAUGELAB_PURE=1 to force the NumPy backend, e.g. to benchmark
one against the other.
"""

import os

from gaugelab.kernels import reference

try:
    from gaugelab.kernels import _core
except ImportError:
    _core = None

if _core is not None and os.environ.get("GAUGELAB_PURE") != "1":
    _active = _core
else:
    _active = reference

field_strength = _active.field_strength
eom_rhs = _active.eom_rhs
gauss = _active.gauss
leapfrog_steps = _active.leapfrog_steps


def backend_name() -> str:
    return "compiled" if _active is _core else "numpy"


def available_backends():
    """Name -> module map of the backends importable in this environment."""
    out = {"numpy": reference}
    if _core is not None:
        out["compiled"] = _core
    return out
