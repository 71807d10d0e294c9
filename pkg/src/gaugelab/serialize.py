"""Field-state persistence: a binary format and a JSON text format.

The binary format is little-endian and round-trips bit-exactly:

    magic "GLST" | u32 version | u8 group code | u8 spatial_dim |
    u32 extent per dimension | f64 time | f64 g | A payload | E payload

A and E are C-order float64 blocks of shape (n_sites, spatial_dim, dim).
The JSON form is for human inspection and interchange; it goes through
decimal repr and still round-trips exactly (repr floats parse back to the
same double).

All writers go through atomic_write: output lands under its final name only
on success, so a crash never leaves a truncated file behind.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from gaugelab.algebra import GroupKind, gauge_group
from gaugelab.lattice import FieldState, LatticeGeometry

MAGIC = b"GLST"
FORMAT_VERSION = 1

_KIND_CODE = {GroupKind.U1: 0, GroupKind.SU2: 1, GroupKind.SU3: 2}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}


@contextmanager
def atomic_write(path, binary: bool = False):
    """Write to a temp file in the target directory, then rename over path."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".")
    try:
        if binary:
            handle = os.fdopen(fd, "wb")
        else:
            handle = os.fdopen(fd, "w", encoding="utf-8", newline="\n")
        with handle:
            yield handle
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def state_to_bytes(state: FieldState, g: float) -> bytes:
    geo = state.geometry
    header = struct.pack(
        "<4sIBB", MAGIC, FORMAT_VERSION, _KIND_CODE[state.group.kind], geo.spatial_dim
    )
    header += struct.pack(f"<{geo.spatial_dim}I", *geo.extent)
    header += struct.pack("<dd", state.time, float(g))
    body = state.A.astype("<f8", copy=False).tobytes(order="C")
    body += state.E.astype("<f8", copy=False).tobytes(order="C")
    return header + body


def state_from_bytes(buf: bytes):
    """Inverse of state_to_bytes; returns (state, g)."""
    fixed = struct.calcsize("<4sIBB")
    if len(buf) < fixed:
        raise ValueError("state blob truncated before fixed header")
    magic, version, code, nd = struct.unpack_from("<4sIBB", buf, 0)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    if code not in _CODE_KIND:
        raise ValueError(f"unknown group code {code}")
    if not (1 <= nd <= 3):
        raise ValueError(f"spatial_dim {nd} out of range")
    off = fixed
    if len(buf) < off + 4 * nd + 16:
        raise ValueError("state blob truncated in header")
    extent = struct.unpack_from(f"<{nd}I", buf, off)
    off += 4 * nd
    time, g = struct.unpack_from("<dd", buf, off)
    off += 16

    group = gauge_group(_CODE_KIND[code])
    geometry = LatticeGeometry(extent=tuple(int(n) for n in extent))
    shape = (geometry.n_sites, nd, group.dim)
    block = 8 * geometry.n_sites * nd * group.dim
    if len(buf) != off + 2 * block:
        raise ValueError(
            f"state blob has {len(buf) - off} payload bytes, expected {2 * block}"
        )
    A = np.frombuffer(buf, dtype="<f8", count=block // 8, offset=off)
    E = np.frombuffer(buf, dtype="<f8", count=block // 8, offset=off + block)
    state = FieldState(
        geometry=geometry,
        group=group,
        A=A.reshape(shape).copy(),
        E=E.reshape(shape).copy(),
        time=float(time),
    )
    return state, float(g)


def save_state_binary(path, state: FieldState, g: float):
    with atomic_write(path, binary=True) as f:
        f.write(state_to_bytes(state, g))


def load_state_binary(path):
    with open(path, "rb") as f:
        return state_from_bytes(f.read())


def state_to_text(state: FieldState, g: float) -> str:
    geo = state.geometry
    doc = {
        "format_version": FORMAT_VERSION,
        "group": state.group.kind.value,
        "spatial_dim": geo.spatial_dim,
        "extent": list(geo.extent),
        "time": state.time,
        "g": float(g),
        "A": state.A.tolist(),
        "E": state.E.tolist(),
    }
    return json.dumps(doc, indent=1)


def state_from_text(text: str):
    """Inverse of state_to_text; returns (state, g)."""
    doc = json.loads(text)
    for key in ("format_version", "group", "spatial_dim", "extent", "time", "g", "A", "E"):
        if key not in doc:
            raise ValueError(f"state document missing key {key!r}")
    if doc["format_version"] != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {doc['format_version']}")
    group = gauge_group(GroupKind(doc["group"]))
    geometry = LatticeGeometry(extent=tuple(int(n) for n in doc["extent"]))
    if doc["spatial_dim"] != geometry.spatial_dim:
        raise ValueError("spatial_dim does not match extent length")
    shape = (geometry.n_sites, geometry.spatial_dim, group.dim)
    A = np.asarray(doc["A"], dtype=np.float64)
    E = np.asarray(doc["E"], dtype=np.float64)
    if A.shape != shape or E.shape != shape:
        raise ValueError(f"payload shape mismatch: {A.shape}/{E.shape} vs {shape}")
    state = FieldState(
        geometry=geometry, group=group, A=A, E=E, time=float(doc["time"])
    )
    return state, float(doc["g"])


def save_state_text(path, state: FieldState, g: float):
    with atomic_write(path) as f:
        f.write(state_to_text(state, g))
        f.write("\n")


def load_state_text(path):
    with open(path, "r", encoding="utf-8") as f:
        return state_from_text(f.read())
