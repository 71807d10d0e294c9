"""Superposition-defect and Fourier-mode diagnostics.

The central measurement: evolve two states and their componentwise sum under
identical parameters and track how far the evolved sum drifts from the sum of
the evolved parts.  For linear dynamics (any group at g = 0, or U(1) at any g)
the defect stays at roundoff level; nonabelian evolution at finite coupling
grows a genuine defect.  The mode diagnostics tell the same story in Fourier
space: linear evolution leaves the set of active modes alone, nonlinear
evolution pumps energy into modes that were absent initially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from gaugelab import kernels
from gaugelab.algebra import StructureConstants
from gaugelab.errors import BlowupError
from gaugelab.evolve import EvolveParams, evolve
from gaugelab.lattice import FieldState, _require_finite, kernel_tables

# Fourier amplitudes below this magnitude count as inactive modes.
MODE_FLOOR = 1e-12

# A defect denominator below this is a degenerate (both-zero) configuration.
_NORM_FLOOR = 1e-30


@dataclass(eq=False)
class DefectSeries:
    """Time series of the superposition-violation norm.

    defect(t) = |S_t(a+b) - S_t(a) - S_t(b)| / (|S_t(a)| + |S_t(b)|) with the
    L2 norm over all A and E components; S_t is the evolution map.
    """

    times: np.ndarray
    defect: np.ndarray
    norm_a: np.ndarray
    norm_b: np.ndarray
    norm_sum_evolved: np.ndarray


@dataclass(eq=False)
class ModeSpectrum:
    """Discrete Fourier content of A, one entry per (k, direction, color).

    Amplitudes use the unitary normalization, so sum |amplitude|^2 over all
    modes equals sum A^2 over the lattice (Parseval).  Only modes above
    MODE_FLOOR are listed; total_power counts everything.
    """

    modes: list
    total_power: float


@dataclass(eq=False)
class ModeCouplingReport:
    mode_energy_initial: dict
    mode_energy_final: dict
    offdiagonal_transfer: float


def _check_pair(sA: FieldState, sB: FieldState, sc: StructureConstants):
    if sA.geometry != sB.geometry or sA.group != sB.group:
        raise ValueError("states must share geometry and gauge group")
    if sA.group != sc.group:
        raise ValueError("structure constants do not match the states' group")
    if sA.time != 0.0 or sB.time != 0.0:
        raise ValueError("superposition runs start at time 0")
    _require_finite(sA)
    _require_finite(sB)


def _pair_norm(A, E) -> float:
    return math.sqrt(float(np.sum(A**2) + np.sum(E**2)))


def superposition_defect(
    sA: FieldState, sB: FieldState, sc: StructureConstants, p: EvolveParams
) -> DefectSeries:
    """Evolve sA, sB, and sA+sB in lockstep and record the defect series.

    Symmetric under swapping sA and sB bit-for-bit.  Raises on degenerate
    (both effectively zero) input and propagates blowups with the offending
    trajectory named.
    """
    _check_pair(sA, sB, sc)
    if _pair_norm(sA.A, sA.E) + _pair_norm(sB.A, sB.E) < _NORM_FLOOR:
        raise ValueError("degenerate superposition: both input states are zero")

    tables = kernel_tables(sA.geometry, sc)
    Aa, Ea = sA.A.copy(), sA.E.copy()
    Ab, Eb = sB.A.copy(), sB.E.copy()
    As, Es = Aa + Ab, Ea + Eb

    n_obs = p.steps // p.observe_every
    times = np.zeros(n_obs + 1)
    defect = np.zeros(n_obs + 1)
    norm_a = np.zeros(n_obs + 1)
    norm_b = np.zeros(n_obs + 1)
    norm_sum = np.zeros(n_obs + 1)

    def measure(k, step):
        na = _pair_norm(Aa, Ea)
        nb = _pair_norm(Ab, Eb)
        denom = na + nb
        if denom < _NORM_FLOOR:
            raise ValueError("degenerate superposition: evolved norms vanished")
        diff = math.sqrt(
            float(np.sum((As - (Aa + Ab)) ** 2) + np.sum((Es - (Ea + Eb)) ** 2))
        )
        times[k] = step * p.dt
        defect[k] = diff / denom
        norm_a[k] = na
        norm_b[k] = nb
        norm_sum[k] = _pair_norm(As, Es)

    measure(0, 0)
    trajectories = ((Aa, Ea, "a"), (Ab, Eb, "b"), (As, Es, "a+b"))
    for k in range(1, n_obs + 1):
        for A, E, label in trajectories:
            bad = kernels.leapfrog_steps(
                A, E, p.observe_every, float(p.dt), float(p.g), tables
            )
            if bad >= 0:
                raise BlowupError(
                    step=(k - 1) * p.observe_every + bad + 1,
                    detail=f"trajectory {label}",
                )
        measure(k, k * p.observe_every)

    return DefectSeries(times, defect, norm_a, norm_b, norm_sum)


@dataclass(eq=False)
class ScalingResult:
    """Defect at final time per coupling, with the log-log slope fitted over
    the smallest decade of g (None when the defects sit at the noise floor)."""

    points: list
    slope: float | None


def defect_scaling(
    sA: FieldState,
    sB: FieldState,
    sc: StructureConstants,
    p: EvolveParams,
    g_list,
) -> ScalingResult:
    """Run superposition_defect per coupling in g_list (sorted ascending)."""
    g_list = [float(g) for g in g_list]
    if not g_list:
        raise ValueError("g_list must not be empty")
    if any(not (math.isfinite(g) and g > 0) for g in g_list):
        raise ValueError("all couplings in g_list must be finite and > 0")
    if any(b <= a for a, b in zip(g_list, g_list[1:])):
        raise ValueError("g_list must be sorted strictly ascending")

    points = []
    for g in g_list:
        series = superposition_defect(sA, sB, sc, replace(p, g=g))
        points.append((g, float(series.defect[-1])))

    slope = None
    max_defect = max(d for _, d in points)
    if max_defect > 1e-10:
        decade_cap = g_list[0] * 10.0 * (1.0 + 1e-12)
        decade = [(g, d) for g, d in points if g <= decade_cap and d > 0.0]
        if len(decade) >= 2:
            lg = np.log([g for g, _ in decade])
            ld = np.log([d for _, d in decade])
            slope = float(np.polyfit(lg, ld, 1)[0])
    return ScalingResult(points, slope)


def _signed_mode(idx: int, n: int) -> int:
    return idx if idx <= n // 2 else idx - n


def _spectrum_array(state: FieldState) -> np.ndarray:
    """Unitary DFT of A over the spatial axes, shape extent + (dirs, colors)."""
    geo = state.geometry
    shaped = state.A.reshape(geo.extent + (geo.spatial_dim, state.group.dim))
    axes = tuple(range(geo.spatial_dim))
    return np.fft.fftn(shaped, axes=axes) / math.sqrt(geo.n_sites)


def mode_spectrum(state: FieldState) -> ModeSpectrum:
    """All Fourier modes of A above the amplitude floor, sorted by
    (wave vector, direction, color)."""
    _require_finite(state)
    geo = state.geometry
    ahat = _spectrum_array(state)
    total_power = float(np.sum(np.abs(ahat) ** 2))
    modes = []
    for idx in np.argwhere(np.abs(ahat) > MODE_FLOOR):
        kvec = tuple(
            _signed_mode(int(m), n) for m, n in zip(idx[: geo.spatial_dim], geo.extent)
        )
        i = int(idx[-2])
        a = int(idx[-1])
        modes.append((kvec, i, a, complex(ahat[tuple(idx)])))
    modes.sort(key=lambda m: (m[0], m[1], m[2]))
    return ModeSpectrum(modes, total_power)


def mode_coupling(
    state: FieldState, sc: StructureConstants, p: EvolveParams
) -> ModeCouplingReport:
    """Evolve and compare initial/final spectra.

    offdiagonal_transfer is the total |amplitude|^2 arriving in modes that
    were inactive (below MODE_FLOOR) at t = 0.
    """
    _require_finite(state)
    ahat0 = _spectrum_array(state)
    active0 = np.abs(ahat0) > MODE_FLOOR

    final = evolve(state, sc, p).final_state
    ahat1 = _spectrum_array(final)
    power1 = np.abs(ahat1) ** 2
    transfer = float(np.sum(power1[~active0]))

    geo = state.geometry

    def as_map(ahat):
        out = {}
        for idx in np.argwhere(np.abs(ahat) > MODE_FLOOR):
            kvec = tuple(
                _signed_mode(int(m), n)
                for m, n in zip(idx[: geo.spatial_dim], geo.extent)
            )
            key = (kvec, int(idx[-2]), int(idx[-1]))
            out[key] = float(np.abs(ahat[tuple(idx)]) ** 2)
        return dict(sorted(out.items()))

    return ModeCouplingReport(
        mode_energy_initial=as_map(ahat0),
        mode_energy_final=as_map(ahat1),
        offdiagonal_transfer=transfer,
    )
