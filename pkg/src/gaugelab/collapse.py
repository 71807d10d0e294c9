"""Collapse-time phenomenology built on the nonlinear energy scale.

The model: a configuration carrying nonlinear interaction energy E decoheres
on the timescale tau = hbar / E.  Zero nonlinear energy (abelian dynamics)
means tau is infinite and superpositions persist.  On top of tau sit some
simple observables: a Poisson process of collapse hits, interferometer
fringe visibility after a flight time, and a coherence-length table over a
catalog of physical systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from gaugelab.lattice import EnergyReport

# Small negative nonlinear energies are integrator roundoff, not physics.
_NEGATIVE_TOL = 1e-10

_PRESET_KEYS = {"name", "e_nl_ev", "speed_m_s", "source"}
_SOURCES = ("paper", "user")


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar in eV s and c in m/s; override for unit experiments."""

    hbar_ev_s: float = 6.582119569e-16
    c_m_s: float = 2.99792458e8

    def __post_init__(self):
        if not (math.isfinite(self.hbar_ev_s) and self.hbar_ev_s > 0):
            raise ValueError("hbar_ev_s must be finite and > 0")
        if not (math.isfinite(self.c_m_s) and self.c_m_s > 0):
            raise ValueError("c_m_s must be finite and > 0")


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class SystemPreset:
    """One catalog entry: a system with a characteristic nonlinear energy.

    source records provenance: "paper" rows are grounded numbers, "user"
    rows are editable placeholders.
    """

    name: str
    e_nl_ev: float
    speed_m_s: float
    source: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("preset name must be nonempty")
        if not (math.isfinite(self.e_nl_ev) and self.e_nl_ev >= 0):
            raise ValueError(f"preset {self.name!r}: e_nl_ev must be finite and >= 0")
        if not (0 < self.speed_m_s <= DEFAULT_CONSTANTS.c_m_s):
            raise ValueError(f"preset {self.name!r}: speed_m_s must lie in (0, c]")
        if self.source not in _SOURCES:
            raise ValueError(
                f"preset {self.name!r}: source must be one of {_SOURCES}"
            )


@dataclass(frozen=True)
class CollapseEstimate:
    """tau_s * hit_rate_hz == 1 in the finite case; (inf, 0) when E = 0."""

    tau_s: float
    hit_rate_hz: float
    coherence_length_m: float | None = None


def collapse_time(
    e_nl_ev: float, constants: PhysicalConstants = DEFAULT_CONSTANTS
) -> CollapseEstimate:
    """tau = hbar / E_NL.  E_NL = 0 maps to an infinite collapse time."""
    e_nl_ev = float(e_nl_ev)
    if not math.isfinite(e_nl_ev):
        raise ValueError("e_nl_ev must be finite")
    if e_nl_ev < 0:
        raise ValueError(f"e_nl_ev must be >= 0, got {e_nl_ev:g}")
    if e_nl_ev == 0.0:
        return CollapseEstimate(tau_s=math.inf, hit_rate_hz=0.0)
    tau = constants.hbar_ev_s / e_nl_ev
    return CollapseEstimate(tau_s=tau, hit_rate_hz=1.0 / tau)


def lattice_collapse_time(
    report: EnergyReport,
    energy_scale_ev: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> CollapseEstimate:
    """Convert a lattice energy report to physical units and apply the model.

    energy_scale_ev is the eV value of one lattice energy unit.  Nonlinear
    energy more negative than roundoff tolerance is rejected; tiny negative
    values clamp to zero.
    """
    energy_scale_ev = float(energy_scale_ev)
    if not (math.isfinite(energy_scale_ev) and energy_scale_ev > 0):
        raise ValueError("energy_scale_ev must be finite and > 0")
    nl = report.nonlinear
    if nl < -_NEGATIVE_TOL:
        raise ValueError(
            f"nonlinear energy {nl:g} is negative beyond roundoff tolerance"
        )
    return collapse_time(max(nl, 0.0) * energy_scale_ev, constants)


@dataclass(frozen=True)
class TableRow:
    preset: SystemPreset
    estimate: CollapseEstimate
    # None on the first row, else whether tau strictly decreased.
    strictly_below_previous: bool | None


def coherence_table(
    presets, constants: PhysicalConstants = DEFAULT_CONSTANTS
) -> list:
    """Collapse time and coherence length per preset, sorted by tau
    descending (ties keep catalog order)."""
    presets = list(presets)
    if not presets:
        raise ValueError("preset list must not be empty")
    names = [s.name for s in presets]
    if len(set(names)) != len(names):
        raise ValueError("preset names must be unique")

    estimated = []
    for preset in presets:
        base = collapse_time(preset.e_nl_ev, constants)
        length = preset.speed_m_s * base.tau_s
        estimated.append(
            (
                preset,
                CollapseEstimate(
                    tau_s=base.tau_s,
                    hit_rate_hz=base.hit_rate_hz,
                    coherence_length_m=length,
                ),
            )
        )
    estimated.sort(key=lambda pair: -pair[1].tau_s)

    rows = []
    prev_tau = None
    for preset, est in estimated:
        below = None if prev_tau is None else bool(est.tau_s < prev_tau)
        rows.append(TableRow(preset=preset, estimate=est, strictly_below_previous=below))
        prev_tau = est.tau_s
    return rows


def hit_process(tau_s: float, horizon_s: float, seed: int) -> np.ndarray:
    """Sample collapse-hit times on [0, horizon_s]: a homogeneous Poisson
    process with rate 1/tau_s, exact for a given seed."""
    tau_s = float(tau_s)
    horizon_s = float(horizon_s)
    if not (tau_s > 0):
        raise ValueError(f"tau_s must be > 0, got {tau_s:g}")
    if not (math.isfinite(horizon_s) and horizon_s > 0):
        raise ValueError("horizon_s must be finite and > 0")
    if seed < 0:
        raise ValueError("seed must be >= 0")
    if math.isinf(tau_s):
        return np.empty(0)

    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    block = max(16, int(horizon_s / tau_s * 1.25) + 16)
    chunks = []
    start = 0.0
    while True:
        arrivals = start + np.cumsum(rng.exponential(scale=tau_s, size=block))
        keep = int(np.searchsorted(arrivals, horizon_s, side="right"))
        chunks.append(arrivals[:keep])
        if keep < block:
            break
        start = float(arrivals[-1])
    return np.concatenate(chunks)


def visibility(flight_time_s: float, tau_s: float) -> float:
    """Interference fringe visibility exp(-flight/tau); 1.0 for infinite tau."""
    flight_time_s = float(flight_time_s)
    tau_s = float(tau_s)
    if not (math.isfinite(flight_time_s) and flight_time_s >= 0):
        raise ValueError("flight_time_s must be finite and >= 0")
    if not (tau_s > 0):
        raise ValueError(f"tau_s must be > 0, got {tau_s:g}")
    if math.isinf(tau_s):
        return 1.0
    return math.exp(-flight_time_s / tau_s)


def parse_presets(text: str) -> list:
    """Parse a TOML preset catalog: [[system]] entries with keys name,
    e_nl_ev, speed_m_s, source.  Unknown keys are rejected."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ValueError(f"invalid preset TOML: {exc}") from None
    unknown_top = set(data) - {"system"}
    if unknown_top:
        raise ValueError(f"unknown top-level preset keys: {sorted(unknown_top)}")
    systems = data.get("system")
    if not isinstance(systems, list) or not systems:
        raise ValueError("preset catalog needs at least one [[system]] entry")

    presets = []
    for i, entry in enumerate(systems):
        if not isinstance(entry, dict):
            raise ValueError(f"system[{i}] is not a table")
        unknown = set(entry) - _PRESET_KEYS
        if unknown:
            raise ValueError(f"system[{i}]: unknown keys {sorted(unknown)}")
        missing = _PRESET_KEYS - set(entry)
        if missing:
            raise ValueError(f"system[{i}]: missing keys {sorted(missing)}")
        name = entry["name"]
        if not isinstance(name, str):
            raise ValueError(f"system[{i}]: name must be a string")
        for key in ("e_nl_ev", "speed_m_s"):
            if isinstance(entry[key], bool) or not isinstance(entry[key], (int, float)):
                raise ValueError(f"system[{i}].{key}: expected a number")
        source = entry["source"]
        if not isinstance(source, str):
            raise ValueError(f"system[{i}]: source must be a string")
        try:
            presets.append(
                SystemPreset(
                    name=name,
                    e_nl_ev=float(entry["e_nl_ev"]),
                    speed_m_s=float(entry["speed_m_s"]),
                    source=source,
                )
            )
        except ValueError as exc:
            raise ValueError(f"system[{i}]: {exc}") from None
    return presets


def load_presets(path) -> list:
    with open(path, "rb") as f:
        text = f.read().decode("utf-8")
    return parse_presets(text)


def default_presets() -> list:
    """The catalog shipped with the package."""
    text = (
        resources.files("gaugelab")
        .joinpath("presets/default_systems.toml")
        .read_text(encoding="utf-8")
    )
    return parse_presets(text)
