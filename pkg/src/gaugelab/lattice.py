"""Field states on a periodic lattice: storage, initialization, field strength,
energy split, and the Gauss-constraint residual.

Fields live in temporal gauge: the state is the pair (A_i^a(x), E_i^a(x)) with
E = dA/dt.  Arrays are indexed (site, spatial direction, color) with sites
enumerated row-major over the lattice dimensions; the lattice spacing is fixed
to 1, so every quantity here is in lattice units.  Spatial derivatives are
periodic central differences, D_i f(x) = (f(x + e_i) - f(x - e_i)) / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from gaugelab import kernels
from gaugelab.algebra import GaugeGroup, StructureConstants


@dataclass(frozen=True)
class LatticeGeometry:
    """Periodic lattice with per-dimension site counts.

    Each extent must be at least 4: central differences on a ring of 2 or 3
    sites would couple a site to its own wrap-around image.
    """

    extent: tuple
    spacing: float = 1.0

    def __post_init__(self):
        extent = tuple(int(n) for n in self.extent)
        object.__setattr__(self, "extent", extent)
        if not 1 <= len(extent) <= 3:
            raise ValueError(f"spatial_dim must be 1, 2, or 3, got {len(extent)}")
        for n in extent:
            if n < 4:
                raise ValueError(f"every extent must be >= 4, got {extent}")
        if self.spacing != 1.0:
            raise ValueError("lattice spacing is fixed to 1 in simulation units")

    @property
    def spatial_dim(self) -> int:
        return len(self.extent)

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.extent))


@lru_cache(maxsize=None)
def _neighbor_tables(extent):
    """Flat site indices of the +1/-1 periodic neighbors along each dimension."""
    dims = len(extent)
    coords = np.indices(extent).reshape(dims, -1)
    n_sites = coords.shape[1]
    ip = np.empty((n_sites, dims), dtype=np.int64)
    im = np.empty((n_sites, dims), dtype=np.int64)
    for d in range(dims):
        shifted = coords.copy()
        shifted[d] = (coords[d] + 1) % extent[d]
        ip[:, d] = np.ravel_multi_index(shifted, extent)
        shifted[d] = (coords[d] - 1) % extent[d]
        im[:, d] = np.ravel_multi_index(shifted, extent)
    ip.flags.writeable = False
    im.flags.writeable = False
    return ip, im


@lru_cache(maxsize=None)
def _pair_tables(dims):
    """Ordered direction pairs i < j plus index/sign lookups for F_ij.

    psign[j, i] carries the antisymmetry: F_ji = psign[j, i] * F[pidx[j, i]].
    """
    pairs = [(i, j) for i in range(dims) for j in range(i + 1, dims)]
    pi = np.array([p[0] for p in pairs], dtype=np.int32)
    pj = np.array([p[1] for p in pairs], dtype=np.int32)
    pidx = np.zeros((dims, dims), dtype=np.int32)
    psign = np.zeros((dims, dims), dtype=np.float64)
    for p, (i, j) in enumerate(pairs):
        pidx[i, j] = p
        pidx[j, i] = p
        psign[i, j] = 1.0
        psign[j, i] = -1.0
    for arr in (pi, pj, pidx, psign):
        arr.flags.writeable = False
    return pi, pj, pidx, psign


@lru_cache(maxsize=None)
def kernel_tables(geometry: LatticeGeometry, sc: StructureConstants):
    """Bundle of lookup arrays consumed by the compute kernels."""
    ip, im = _neighbor_tables(geometry.extent)
    pi, pj, pidx, psign = _pair_tables(geometry.spatial_dim)
    fa, fb, fc, fv = sc.entry_arrays
    return (ip, im, pi, pj, pidx, psign, fa, fb, fc, fv)


@dataclass(eq=False)
class FieldState:
    """Gauge potential A and electric field E on the lattice at one instant.

    Both arrays have shape (n_sites, spatial_dim, group.dim), float64,
    C-contiguous.
    """

    geometry: LatticeGeometry
    group: GaugeGroup
    A: np.ndarray
    E: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        shape = (self.geometry.n_sites, self.geometry.spatial_dim, self.group.dim)
        for name in ("A", "E"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if arr.shape != shape:
                raise ValueError(
                    f"{name} must have shape {shape}, got {arr.shape}"
                )
            setattr(self, name, arr)

    def copy(self) -> "FieldState":
        return FieldState(
            self.geometry, self.group, self.A.copy(), self.E.copy(), self.time
        )

    def is_finite(self) -> bool:
        return math.isfinite(float(self.A.sum())) and math.isfinite(
            float(self.E.sum())
        )


def _require_finite(state: FieldState):
    if not state.is_finite():
        raise ValueError("field state contains non-finite entries")


def state_norm(state: FieldState) -> float:
    """L2 norm over all A and E components."""
    return math.sqrt(float(np.sum(state.A**2) + np.sum(state.E**2)))


def add_states(a: FieldState, b: FieldState) -> FieldState:
    """Componentwise sum of two states at the same time."""
    if a.geometry != b.geometry or a.group != b.group:
        raise ValueError("cannot add states with different geometry or group")
    if a.time != b.time:
        raise ValueError("cannot add states at different times")
    return FieldState(a.geometry, a.group, a.A + b.A, a.E + b.E, a.time)


def scale_state(state: FieldState, factor: float) -> FieldState:
    return FieldState(
        state.geometry, state.group, factor * state.A, factor * state.E, state.time
    )


class InitKind(Enum):
    ZERO = "Zero"
    PLANE_WAVE = "PlaneWave"
    RANDOM_GAUSSIAN = "RandomGaussian"
    WAVE_PACKET = "WavePacket"


@dataclass(frozen=True)
class InitSpec:
    """Reproducible initial conditions.

    `color_mask` (and `direction_mask`) restrict which components are excited;
    both default to all.  `wave_vector` holds integer mode numbers per lattice
    dimension, `seed` drives the RandomGaussian draw, `width` the WavePacket
    envelope.
    """

    kind: InitKind
    amplitude: float = 0.0
    wave_vector: tuple | None = None
    color_mask: tuple | None = None
    direction_mask: tuple | None = None
    width: float | None = None
    seed: int | None = None

    def validate_for(self, geometry: LatticeGeometry, group: GaugeGroup):
        if not math.isfinite(self.amplitude):
            raise ValueError("init amplitude must be finite")
        if self.color_mask is not None:
            if len(self.color_mask) == 0:
                raise ValueError("color_mask must not be empty")
            for a in self.color_mask:
                if not 0 <= a < group.dim:
                    raise ValueError(
                        f"color index {a} outside [0, {group.dim}) in color_mask"
                    )
        if self.direction_mask is not None:
            if len(self.direction_mask) == 0:
                raise ValueError("direction_mask must not be empty")
            for i in self.direction_mask:
                if not 0 <= i < geometry.spatial_dim:
                    raise ValueError(
                        f"direction index {i} outside "
                        f"[0, {geometry.spatial_dim}) in direction_mask"
                    )
        needs_wave = self.kind in (InitKind.PLANE_WAVE, InitKind.WAVE_PACKET)
        if needs_wave:
            if self.wave_vector is None:
                raise ValueError(f"{self.kind.value} init requires wave_vector")
            if len(self.wave_vector) != geometry.spatial_dim:
                raise ValueError(
                    f"wave_vector must have {geometry.spatial_dim} entries"
                )
            for m, n in zip(self.wave_vector, geometry.extent):
                if not -(n // 2) <= m <= n // 2:
                    raise ValueError(
                        f"mode number {m} outside Brillouin range "
                        f"[-{n // 2}, {n // 2}]"
                    )
        if self.kind is InitKind.WAVE_PACKET:
            if self.width is None or not self.width > 0:
                raise ValueError("WavePacket init requires width > 0")
        if self.kind is InitKind.RANDOM_GAUSSIAN:
            if self.seed is None or self.seed < 0:
                raise ValueError("RandomGaussian init requires seed >= 0")


def _component_masks(spec: InitSpec, geometry, group):
    colors = spec.color_mask if spec.color_mask is not None else range(group.dim)
    dirs = (
        spec.direction_mask
        if spec.direction_mask is not None
        else range(geometry.spatial_dim)
    )
    return sorted(set(dirs)), sorted(set(colors))


def _phase_grid(geometry: LatticeGeometry, wave_vector) -> np.ndarray:
    """2*pi*sum_d m_d x_d / N_d as a flat (n_sites,) array."""
    coords = np.indices(geometry.extent).reshape(geometry.spatial_dim, -1)
    phase = np.zeros(geometry.n_sites)
    for d, (m, n) in enumerate(zip(wave_vector, geometry.extent)):
        phase += (2.0 * np.pi * m / n) * coords[d]
    return phase


def make_state(
    geometry: LatticeGeometry, group: GaugeGroup, spec: InitSpec
) -> FieldState:
    """Build the initial state described by `spec` at time 0."""
    spec.validate_for(geometry, group)
    shape = (geometry.n_sites, geometry.spatial_dim, group.dim)
    A = np.zeros(shape)
    E = np.zeros(shape)
    dirs, colors = _component_masks(spec, geometry, group)

    if spec.kind is InitKind.ZERO:
        pass
    elif spec.kind is InitKind.PLANE_WAVE:
        wave = spec.amplitude * np.cos(_phase_grid(geometry, spec.wave_vector))
        for i in dirs:
            for a in colors:
                A[:, i, a] = wave
    elif spec.kind is InitKind.WAVE_PACKET:
        coords = np.indices(geometry.extent).reshape(geometry.spatial_dim, -1)
        r2 = np.zeros(geometry.n_sites)
        for d, n in enumerate(geometry.extent):
            dx = coords[d] - n / 2.0
            dx -= n * np.round(dx / n)
            r2 += dx**2
        envelope = np.exp(-r2 / (2.0 * spec.width**2))
        wave = spec.amplitude * envelope * np.cos(_phase_grid(geometry, spec.wave_vector))
        for i in dirs:
            for a in colors:
                A[:, i, a] = wave
    elif spec.kind is InitKind.RANDOM_GAUSSIAN:
        rng = np.random.Generator(np.random.Philox(key=spec.seed))
        full_A = spec.amplitude * rng.standard_normal(shape)
        full_E = spec.amplitude * rng.standard_normal(shape)
        for i in dirs:
            for a in colors:
                A[:, i, a] = full_A[:, i, a]
                E[:, i, a] = full_E[:, i, a]
    else:  # pragma: no cover
        raise ValueError(f"unknown init kind {spec.kind}")

    return FieldState(geometry, group, A, E, 0.0)


@dataclass(eq=False)
class FieldStrength:
    """Spatial field strength stored over ordered direction pairs i < j."""

    F: np.ndarray  # (n_sites, n_pairs, group.dim)
    pairs: tuple   # ((i, j), ...) matching the pair axis

    def full(self) -> np.ndarray:
        """Expand to the antisymmetric (n_sites, dim, dim, colors) array."""
        n_sites, _, ng = self.F.shape
        nd = max((j for _, j in self.pairs), default=0) + 1
        out = np.zeros((n_sites, nd, nd, ng))
        for p, (i, j) in enumerate(self.pairs):
            out[:, i, j, :] = self.F[:, p, :]
            out[:, j, i, :] = -self.F[:, p, :]
        return out


@dataclass(frozen=True)
class EnergyReport:
    """Energy split: total = electric + magnetic_linear + nonlinear.

    `nonlinear` is the magnetic energy of the full field strength minus the
    magnetic energy recomputed with the commutator terms switched off on the
    same A; it vanishes identically for abelian fields.
    """

    total: float
    electric: float
    magnetic_linear: float
    nonlinear: float
    gauss_residual_l2: float


def field_strength(state: FieldState, sc: StructureConstants, g: float) -> FieldStrength:
    """F_ij^a = D_i A_j^a - D_j A_i^a - g f_abc A_i^b A_j^c over pairs i < j."""
    _require_finite(state)
    tables = kernel_tables(state.geometry, sc)
    F = kernels.field_strength(state.A, float(g), tables)
    pi, pj = tables[2], tables[3]
    pairs = tuple((int(i), int(j)) for i, j in zip(pi, pj))
    return FieldStrength(F, pairs)


def gauss_residual(state: FieldState, sc: StructureConstants, g: float) -> float:
    """L2 norm over sites and colors of the temporal-gauge Gauss constraint
    G^a(x) = sum_i [D_i E_i^a - g f_abc A_i^b E_i^c]."""
    _require_finite(state)
    tables = kernel_tables(state.geometry, sc)
    G = kernels.gauss(state.A, state.E, float(g), tables)
    return math.sqrt(float(np.sum(G**2)))


def energy_report(state: FieldState, sc: StructureConstants, g: float) -> EnergyReport:
    """Total/electric/magnetic/nonlinear energy split plus the Gauss residual.

    The nonlinear share is H(g) - H(g -> 0) evaluated on the identical (A, E),
    i.e. exactly the part of the energy carried by the commutator terms.
    """
    _require_finite(state)
    tables = kernel_tables(state.geometry, sc)
    electric = 0.5 * float(np.sum(state.E**2))
    F_full = kernels.field_strength(state.A, float(g), tables)
    magnetic = 0.5 * float(np.sum(F_full**2))
    if g == 0.0 or len(sc.table) == 0:
        magnetic_linear = magnetic
    else:
        F_lin = kernels.field_strength(state.A, 0.0, tables)
        magnetic_linear = 0.5 * float(np.sum(F_lin**2))
    return EnergyReport(
        total=electric + magnetic,
        electric=electric,
        magnetic_linear=magnetic_linear,
        nonlinear=magnetic - magnetic_linear,
        gauss_residual_l2=gauss_residual(state, sc, g),
    )
