"""Scenario-driven command line: TOML configs in, CSV/JSON/binary files out.

One subcommand per analysis; every run is fully described by its scenario
document, so a config file plus this package version pins the output bytes
exactly.  Exit codes: 0 success, 2 configuration error, 3 numeric failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from gaugelab.algebra import GaugeGroup, GroupKind, gauge_group, structure_constants
from gaugelab.analysis import (
    defect_scaling,
    mode_coupling,
    mode_spectrum,
    superposition_defect,
)
from gaugelab.chaos import lyapunov_benettin
from gaugelab.collapse import (
    DEFAULT_CONSTANTS,
    coherence_table,
    collapse_time,
    default_presets,
    hit_process,
    lattice_collapse_time,
    load_presets,
    visibility,
)
from gaugelab.errors import ConfigError, NumericError
from gaugelab.evolve import EvolveParams, evolve
from gaugelab.lattice import (
    InitKind,
    InitSpec,
    LatticeGeometry,
    add_states,
    energy_report,
    make_state,
)
from gaugelab.serialize import atomic_write, save_state_binary

COMMANDS = (
    "evolve",
    "defect",
    "scaling",
    "spectrum",
    "modecoupling",
    "lyapunov",
    "collapse",
    "table",
    "visibility",
)

# Commands that run lattice dynamics and therefore need
# [group]/[geometry]/[init_a]; `collapse` joins them when it measures the
# nonlinear energy from a lattice run instead of taking e_nl_ev directly.
_LATTICE_COMMANDS = frozenset(
    {"evolve", "defect", "scaling", "spectrum", "modecoupling", "lyapunov"}
)

_FORMATS = ("csv", "json", "bin")


@dataclass(frozen=True)
class ChaosParams:
    delta0: float
    renorm_interval: int
    perturb_seed: int


@dataclass(frozen=True)
class CollapseParams:
    e_nl_ev: float | None = None
    energy_scale_ev: float | None = None
    flight_time_s: float | None = None
    horizon_s: float | None = None
    seed: int | None = None
    presets_path: str | None = None


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"


@dataclass(frozen=True)
class Scenario:
    name: str
    command: str
    group: GaugeGroup | None = None
    geometry: LatticeGeometry | None = None
    init_a: InitSpec | None = None
    init_b: InitSpec | None = None
    evolve: EvolveParams | None = None
    chaos: ChaosParams | None = None
    collapse: CollapseParams | None = None
    g_list: tuple | None = None
    output: OutputSpec = OutputSpec()


_MISSING = object()


def _type_name(kind):
    return {
        "str": "a string",
        "int": "an integer",
        "float": "a number",
        "bool": "a boolean",
        "int_list": "a list of integers",
        "num_list": "a list of numbers",
    }[kind]


def _coerce(path, value, kind):
    if kind == "str" and isinstance(value, str):
        return value
    if kind == "bool" and isinstance(value, bool):
        return value
    if kind == "int" and isinstance(value, int) and not isinstance(value, bool):
        return value
    if (
        kind == "float"
        and isinstance(value, (int, float))
        and not isinstance(value, bool)
    ):
        return float(value)
    if kind in ("int_list", "num_list") and isinstance(value, list):
        out = []
        for item in value:
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                raise ConfigError(f"{path}: expected {_type_name(kind)}")
            if kind == "int_list" and not isinstance(item, int):
                raise ConfigError(f"{path}: expected {_type_name(kind)}")
            out.append(float(item) if kind == "num_list" else item)
        return out
    raise ConfigError(f"{path}: expected {_type_name(kind)}, got {value!r}")


class _Section:
    """Strict reader over one TOML table: typed takes, unknown-key rejection."""

    def __init__(self, data, path):
        if not isinstance(data, dict):
            raise ConfigError(f"{path or 'scenario'}: expected a table")
        self._data = data
        self._path = path
        self._seen = set()

    def _key(self, name):
        return f"{self._path}.{name}" if self._path else name

    def take(self, name, kind, default=None, required=False):
        if name not in self._data:
            if required:
                raise ConfigError(f"{self._key(name)}: required")
            return default
        self._seen.add(name)
        return _coerce(self._key(name), self._data[name], kind)

    def subtable(self, name):
        if name not in self._data:
            return None
        self._seen.add(name)
        value = self._data[name]
        if not isinstance(value, dict):
            raise ConfigError(f"{self._key(name)}: expected a table")
        return value

    def finish(self):
        unknown = sorted(set(self._data) - self._seen)
        if unknown:
            where = self._path or "scenario"
            raise ConfigError(f"{where}: unknown key(s) {unknown}")


def _build_group(raw) -> GaugeGroup:
    sec = _Section(raw, "group")
    kind_text = sec.take("kind", "str", required=True)
    dim = sec.take("dim", "int")
    sec.finish()
    try:
        kind = GroupKind(kind_text)
    except ValueError:
        raise ConfigError(
            f"group.kind: must be one of ['U1', 'SU2', 'SU3'], got {kind_text!r}"
        ) from None
    group = gauge_group(kind)
    if dim is not None and dim != group.dim:
        raise ConfigError(
            f"group.dim: {kind.value} has color dimension {group.dim}, got {dim}"
        )
    return group


def _build_geometry(raw) -> LatticeGeometry:
    sec = _Section(raw, "geometry")
    extent = sec.take("extent", "int_list", required=True)
    spatial_dim = sec.take("spatial_dim", "int")
    spacing = sec.take("spacing", "float", default=1.0)
    sec.finish()
    if not 1 <= len(extent) <= 3:
        raise ConfigError(
            f"geometry.extent: needs 1 to 3 entries, got {len(extent)}"
        )
    if spatial_dim is not None and spatial_dim != len(extent):
        raise ConfigError(
            f"geometry.spatial_dim: {spatial_dim} does not match "
            f"len(extent) = {len(extent)}"
        )
    for n in extent:
        if n < 4:
            raise ConfigError(f"geometry.extent: every extent must be >= 4, got {extent}")
    if spacing != 1.0:
        raise ConfigError("geometry.spacing: fixed to 1.0 in simulation units")
    return LatticeGeometry(extent=tuple(extent))


def _build_init(raw, label, geometry, group) -> InitSpec:
    sec = _Section(raw, label)
    kind_text = sec.take("kind", "str", required=True)
    amplitude = sec.take("amplitude", "float", default=0.0)
    wave_vector = sec.take("wave_vector", "int_list")
    color_mask = sec.take("color_mask", "int_list")
    direction_mask = sec.take("direction_mask", "int_list")
    width = sec.take("width", "float")
    seed = sec.take("seed", "int")
    sec.finish()
    try:
        kind = InitKind(kind_text)
    except ValueError:
        valid = [k.value for k in InitKind]
        raise ConfigError(
            f"{label}.kind: must be one of {valid}, got {kind_text!r}"
        ) from None
    spec = InitSpec(
        kind=kind,
        amplitude=amplitude,
        wave_vector=None if wave_vector is None else tuple(wave_vector),
        color_mask=None if color_mask is None else tuple(color_mask),
        direction_mask=None if direction_mask is None else tuple(direction_mask),
        width=width,
        seed=seed,
    )
    if geometry is None or group is None:
        raise ConfigError(f"{label}: requires the [group] and [geometry] blocks")
    try:
        spec.validate_for(geometry, group)
    except ValueError as exc:
        raise ConfigError(f"{label}: {exc}") from None
    return spec


def _build_evolve(raw) -> EvolveParams:
    sec = _Section(raw, "evolve")
    kwargs = {
        "g": sec.take("g", "float", required=True),
        "steps": sec.take("steps", "int", required=True),
        "dt": sec.take("dt", "float", default=0.01),
        "observe_every": sec.take("observe_every", "int", default=10),
        "allow_large_dt": sec.take("allow_large_dt", "bool", default=False),
        "drift_alarm": sec.take("drift_alarm", "float", default=1e-3),
    }
    sec.finish()
    try:
        return EvolveParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"evolve: {exc}") from None


def _build_chaos(raw) -> ChaosParams:
    sec = _Section(raw, "chaos")
    delta0 = sec.take("delta0", "float", required=True)
    renorm_interval = sec.take("renorm_interval", "int", required=True)
    perturb_seed = sec.take("perturb_seed", "int", required=True)
    sec.finish()
    if not (math.isfinite(delta0) and delta0 > 0):
        raise ConfigError("chaos.delta0: must be finite and > 0")
    if renorm_interval < 1:
        raise ConfigError("chaos.renorm_interval: must be >= 1")
    if perturb_seed < 0:
        raise ConfigError("chaos.perturb_seed: must be >= 0")
    return ChaosParams(delta0, renorm_interval, perturb_seed)


def _build_collapse(raw) -> CollapseParams:
    sec = _Section(raw, "collapse")
    params = CollapseParams(
        e_nl_ev=sec.take("e_nl_ev", "float"),
        energy_scale_ev=sec.take("energy_scale_ev", "float"),
        flight_time_s=sec.take("flight_time_s", "float"),
        horizon_s=sec.take("horizon_s", "float"),
        seed=sec.take("seed", "int"),
        presets_path=sec.take("presets_path", "str"),
    )
    sec.finish()
    if params.e_nl_ev is not None and not (
        math.isfinite(params.e_nl_ev) and params.e_nl_ev >= 0
    ):
        raise ConfigError("collapse.e_nl_ev: must be finite and >= 0")
    if params.energy_scale_ev is not None and not (
        math.isfinite(params.energy_scale_ev) and params.energy_scale_ev > 0
    ):
        raise ConfigError("collapse.energy_scale_ev: must be finite and > 0")
    if params.flight_time_s is not None and not (
        math.isfinite(params.flight_time_s) and params.flight_time_s >= 0
    ):
        raise ConfigError("collapse.flight_time_s: must be finite and >= 0")
    if params.horizon_s is not None and not (
        math.isfinite(params.horizon_s) and params.horizon_s > 0
    ):
        raise ConfigError("collapse.horizon_s: must be finite and > 0")
    if params.seed is not None and params.seed < 0:
        raise ConfigError("collapse.seed: must be >= 0")
    return params


def _build_g_list(raw) -> tuple:
    sec = _Section(raw, "scaling")
    g_list = sec.take("g_list", "num_list", required=True)
    sec.finish()
    if not g_list:
        raise ConfigError("scaling.g_list: must not be empty")
    for g in g_list:
        if not (math.isfinite(g) and g > 0):
            raise ConfigError("scaling.g_list: all couplings must be finite and > 0")
    if any(b <= a for a, b in zip(g_list, g_list[1:])):
        raise ConfigError("scaling.g_list: must be sorted strictly ascending")
    return tuple(g_list)


def _build_output(raw) -> OutputSpec:
    sec = _Section(raw, "output")
    path = sec.take("path", "str")
    fmt = sec.take("format", "str", default="csv")
    sec.finish()
    if fmt not in _FORMATS:
        raise ConfigError(
            f"output.format: must be one of {list(_FORMATS)}, got {fmt!r}"
        )
    return OutputSpec(path=path, format=fmt)


def _validate_for_command(s: Scenario) -> Scenario:
    cmd = s.command

    def need(block, value):
        if value is None:
            raise ConfigError(f"{block}: required for command {cmd!r}")

    needs_lattice = cmd in _LATTICE_COMMANDS or (
        cmd == "collapse"
        and (s.collapse is None or s.collapse.e_nl_ev is None)
    )
    if needs_lattice:
        need("group", s.group)
        need("geometry", s.geometry)
        need("init_a", s.init_a)
    if cmd in ("evolve", "defect", "scaling", "modecoupling", "lyapunov"):
        need("evolve", s.evolve)
    if cmd in ("defect", "scaling"):
        need("init_b", s.init_b)
    if cmd == "scaling":
        need("scaling", s.g_list)
    if cmd == "lyapunov":
        need("chaos", s.chaos)
    if cmd == "collapse":
        need("collapse", s.collapse)
        if s.collapse.e_nl_ev is None:
            if s.collapse.energy_scale_ev is None:
                raise ConfigError(
                    "collapse: set e_nl_ev directly, or set energy_scale_ev "
                    "plus [group]/[geometry]/[init_a]/[evolve] to measure "
                    "the nonlinear energy on the lattice"
                )
            need("evolve", s.evolve)
        if s.collapse.horizon_s is not None and s.collapse.seed is None:
            raise ConfigError("collapse.seed: required when horizon_s is set")
    if cmd == "visibility":
        need("collapse", s.collapse)
        if s.collapse.e_nl_ev is None:
            raise ConfigError("collapse.e_nl_ev: required for command 'visibility'")
        if s.collapse.flight_time_s is None:
            raise ConfigError(
                "collapse.flight_time_s: required for command 'visibility'"
            )
    if s.output.format == "bin" and cmd != "evolve":
        raise ConfigError(
            "output.format: 'bin' stores a field-state checkpoint; "
            "only the evolve command produces one"
        )
    return s


def scenario_from_mapping(data, command=None) -> Scenario:
    top = _Section(data, "")
    name = top.take("name", "str", default="scenario")
    file_command = top.take("command", "str")
    raw = {
        block: top.subtable(block)
        for block in (
            "group",
            "geometry",
            "init_a",
            "init_b",
            "evolve",
            "chaos",
            "collapse",
            "scaling",
            "output",
        )
    }
    top.finish()

    if file_command is not None and file_command not in COMMANDS:
        raise ConfigError(
            f"command: must be one of {list(COMMANDS)}, got {file_command!r}"
        )
    if command is None:
        command = file_command
    elif file_command is not None and file_command != command:
        raise ConfigError(
            f"command: scenario declares {file_command!r} but "
            f"{command!r} was requested"
        )
    if command is None:
        raise ConfigError(
            "command: required (set it in the scenario or via the subcommand)"
        )

    group = _build_group(raw["group"]) if raw["group"] is not None else None
    geometry = _build_geometry(raw["geometry"]) if raw["geometry"] is not None else None
    scenario = Scenario(
        name=name,
        command=command,
        group=group,
        geometry=geometry,
        init_a=(
            _build_init(raw["init_a"], "init_a", geometry, group)
            if raw["init_a"] is not None
            else None
        ),
        init_b=(
            _build_init(raw["init_b"], "init_b", geometry, group)
            if raw["init_b"] is not None
            else None
        ),
        evolve=_build_evolve(raw["evolve"]) if raw["evolve"] is not None else None,
        chaos=_build_chaos(raw["chaos"]) if raw["chaos"] is not None else None,
        collapse=(
            _build_collapse(raw["collapse"]) if raw["collapse"] is not None else None
        ),
        g_list=_build_g_list(raw["scaling"]) if raw["scaling"] is not None else None,
        output=(
            _build_output(raw["output"])
            if raw["output"] is not None
            else OutputSpec()
        ),
    )
    return _validate_for_command(scenario)


def parse_scenario(text: str, command: str | None = None) -> Scenario:
    """Parse and fully validate a TOML scenario document."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    return scenario_from_mapping(data, command)


def _apply_override(data: dict, item: str):
    key, sep, raw_value = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"override {item!r}: expected KEY=VALUE")
    try:
        value = tomllib.loads(f"x = {raw_value.strip()}")["x"]
    except tomllib.TOMLDecodeError:
        # Not a TOML literal: take the raw text as a string.
        value = raw_value.strip()
    node = data
    parts = key.split(".")
    for part in parts[:-1]:
        nxt = node.setdefault(part, {})
        if not isinstance(nxt, dict):
            raise ConfigError(f"override {key!r}: {part} is not a table")
        node = nxt
    node[parts[-1]] = value


def load_scenario(
    text: str,
    command: str | None = None,
    overrides=(),
    seed: int | None = None,
    out: str | None = None,
    fmt: str | None = None,
) -> Scenario:
    """parse_scenario plus the CLI-level edits: --override dotted-path
    values, --seed fanned out to every seeded block, --out / --format."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    for item in overrides:
        _apply_override(data, item)
    if seed is not None:
        if seed < 0:
            raise ConfigError("--seed: must be >= 0")
        for block in ("init_a", "init_b"):
            if isinstance(data.get(block), dict):
                data[block]["seed"] = seed
        if isinstance(data.get("chaos"), dict):
            data["chaos"]["perturb_seed"] = seed
        if isinstance(data.get("collapse"), dict):
            data["collapse"]["seed"] = seed
    if out is not None:
        data.setdefault("output", {})["path"] = out
    if fmt is not None:
        data.setdefault("output", {})["format"] = fmt
    return scenario_from_mapping(data, command)


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot emit {type(v).__name__} as TOML")


def scenario_to_toml(s: Scenario) -> str:
    """Canonical TOML for a Scenario; parse_scenario inverts it exactly."""
    lines = [f"name = {_toml_value(s.name)}", f"command = {_toml_value(s.command)}"]

    def block(header, pairs):
        body = [(k, v) for k, v in pairs if v is not None]
        if not body:
            return
        lines.append("")
        lines.append(f"[{header}]")
        for k, v in body:
            lines.append(f"{k} = {_toml_value(v)}")

    if s.group is not None:
        block("group", [("kind", s.group.kind.value)])
    if s.geometry is not None:
        block("geometry", [("extent", list(s.geometry.extent))])
    for label, init in (("init_a", s.init_a), ("init_b", s.init_b)):
        if init is not None:
            block(
                label,
                [
                    ("kind", init.kind.value),
                    ("amplitude", init.amplitude),
                    (
                        "wave_vector",
                        None if init.wave_vector is None else list(init.wave_vector),
                    ),
                    (
                        "color_mask",
                        None if init.color_mask is None else list(init.color_mask),
                    ),
                    (
                        "direction_mask",
                        None
                        if init.direction_mask is None
                        else list(init.direction_mask),
                    ),
                    ("width", init.width),
                    ("seed", init.seed),
                ],
            )
    if s.evolve is not None:
        block(
            "evolve",
            [
                ("g", s.evolve.g),
                ("steps", s.evolve.steps),
                ("dt", s.evolve.dt),
                ("observe_every", s.evolve.observe_every),
                ("allow_large_dt", s.evolve.allow_large_dt),
                ("drift_alarm", s.evolve.drift_alarm),
            ],
        )
    if s.chaos is not None:
        block(
            "chaos",
            [
                ("delta0", s.chaos.delta0),
                ("renorm_interval", s.chaos.renorm_interval),
                ("perturb_seed", s.chaos.perturb_seed),
            ],
        )
    if s.collapse is not None:
        block(
            "collapse",
            [
                ("e_nl_ev", s.collapse.e_nl_ev),
                ("energy_scale_ev", s.collapse.energy_scale_ev),
                ("flight_time_s", s.collapse.flight_time_s),
                ("horizon_s", s.collapse.horizon_s),
                ("seed", s.collapse.seed),
                ("presets_path", s.collapse.presets_path),
            ],
        )
    if s.g_list is not None:
        block("scaling", [("g_list", list(s.g_list))])
    block("output", [("path", s.output.path), ("format", s.output.format)])
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunResult:
    summary: str
    outputs: tuple


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def _write_csv(path, header, rows):
    with atomic_write(path) as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_cell(v) for v in row) + "\n")


def _write_json(path, doc):
    with atomic_write(path) as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def _out_path(s: Scenario) -> Path:
    ext = {"csv": "csv", "json": "json", "bin": "state"}[s.output.format]
    if s.output.path is not None:
        return Path(s.output.path)
    return Path(f"{s.name}_{s.command}.{ext}")


def _mode_rows(mode_map):
    for (kvec, i, a), power in mode_map.items():
        yield list(kvec) + [i, a, power]


def _lattice_setup(s: Scenario):
    sc = structure_constants(s.group)
    state = make_state(s.geometry, s.group, s.init_a)
    return sc, state


def _run_evolve(s: Scenario, path: Path) -> RunResult:
    sc, state = _lattice_setup(s)
    traj = evolve(state, sc, s.evolve)
    fmt = s.output.format
    if fmt == "csv":
        rows = zip(
            traj.times, traj.energy_total, traj.energy_nonlinear, traj.gauss_residual
        )
        _write_csv(
            path, ("t", "energy_total", "energy_nonlinear", "gauss_residual"), rows
        )
    elif fmt == "json":
        _write_json(
            path,
            {
                "command": "evolve",
                "name": s.name,
                "g": s.evolve.g,
                "times": traj.times.tolist(),
                "energy_total": traj.energy_total.tolist(),
                "energy_nonlinear": traj.energy_nonlinear.tolist(),
                "gauss_residual": traj.gauss_residual.tolist(),
                "final_time": traj.final_state.time,
            },
        )
    else:
        save_state_binary(path, traj.final_state, s.evolve.g)
    summary = (
        f"evolve: group={s.group.kind.value} steps={s.evolve.steps} "
        f"energy_total={_cell(traj.energy_total[-1])} "
        f"nonlinear={_cell(traj.energy_nonlinear[-1])} -> {path}"
    )
    return RunResult(summary, (str(path),))


def _run_defect(s: Scenario, path: Path) -> RunResult:
    sc = structure_constants(s.group)
    a = make_state(s.geometry, s.group, s.init_a)
    b = make_state(s.geometry, s.group, s.init_b)
    series = superposition_defect(a, b, sc, s.evolve)
    if s.output.format == "csv":
        rows = zip(
            series.times,
            series.defect,
            series.norm_a,
            series.norm_b,
            series.norm_sum_evolved,
        )
        _write_csv(path, ("t", "defect", "norm_a", "norm_b", "norm_sum"), rows)
    else:
        _write_json(
            path,
            {
                "command": "defect",
                "name": s.name,
                "g": s.evolve.g,
                "times": series.times.tolist(),
                "defect": series.defect.tolist(),
                "norm_a": series.norm_a.tolist(),
                "norm_b": series.norm_b.tolist(),
                "norm_sum": series.norm_sum_evolved.tolist(),
            },
        )
    summary = (
        f"defect: group={s.group.kind.value} g={_cell(s.evolve.g)} "
        f"max={_cell(series.defect.max())} final={_cell(series.defect[-1])} "
        f"-> {path}"
    )
    return RunResult(summary, (str(path),))


def _run_scaling(s: Scenario, path: Path) -> RunResult:
    sc = structure_constants(s.group)
    a = make_state(s.geometry, s.group, s.init_a)
    b = make_state(s.geometry, s.group, s.init_b)
    result = defect_scaling(a, b, sc, s.evolve, s.g_list)
    if s.output.format == "csv":
        _write_csv(path, ("g", "defect"), result.points)
    else:
        _write_json(
            path,
            {
                "command": "scaling",
                "name": s.name,
                "points": [[g, d] for g, d in result.points],
                "slope": result.slope,
            },
        )
    slope_text = "none" if result.slope is None else _cell(result.slope)
    summary = f"scaling: points={len(result.points)} slope={slope_text} -> {path}"
    return RunResult(summary, (str(path),))


def _run_spectrum(s: Scenario, path: Path) -> RunResult:
    sc, state = _lattice_setup(s)
    if s.evolve is not None and s.evolve.steps > 0:
        state = evolve(state, sc, s.evolve).final_state
    spectrum = mode_spectrum(state)
    nd = s.geometry.spatial_dim
    k_cols = tuple(f"k{d}" for d in range(nd))
    if s.output.format == "csv":
        rows = (
            list(kvec) + [i, a, amp.real, amp.imag, abs(amp) ** 2]
            for kvec, i, a, amp in spectrum.modes
        )
        _write_csv(path, k_cols + ("direction", "color", "re", "im", "power"), rows)
    else:
        _write_json(
            path,
            {
                "command": "spectrum",
                "name": s.name,
                "time": state.time,
                "total_power": spectrum.total_power,
                "modes": [
                    {
                        "k": list(kvec),
                        "direction": i,
                        "color": a,
                        "re": amp.real,
                        "im": amp.imag,
                    }
                    for kvec, i, a, amp in spectrum.modes
                ],
            },
        )
    summary = (
        f"spectrum: modes={len(spectrum.modes)} "
        f"total_power={_cell(spectrum.total_power)} -> {path}"
    )
    return RunResult(summary, (str(path),))


def _run_modecoupling(s: Scenario, path: Path) -> RunResult:
    sc, state = _lattice_setup(s)
    if s.init_b is not None:
        state = add_states(state, make_state(s.geometry, s.group, s.init_b))
    report = mode_coupling(state, sc, s.evolve)
    nd = s.geometry.spatial_dim
    if s.output.format == "csv":
        header = (
            ("stage",)
            + tuple(f"k{d}" for d in range(nd))
            + ("direction", "color", "power")
        )
        rows = []
        for stage, mode_map in (
            ("initial", report.mode_energy_initial),
            ("final", report.mode_energy_final),
        ):
            for row in _mode_rows(mode_map):
                rows.append([stage] + row)
        rows.append(
            ["offdiagonal_transfer"]
            + [None] * (nd + 2)
            + [report.offdiagonal_transfer]
        )
        _write_csv(path, header, rows)
    else:

        def records(mode_map):
            return [
                {"k": list(kvec), "direction": i, "color": a, "power": p}
                for (kvec, i, a), p in mode_map.items()
            ]

        _write_json(
            path,
            {
                "command": "modecoupling",
                "name": s.name,
                "offdiagonal_transfer": report.offdiagonal_transfer,
                "initial": records(report.mode_energy_initial),
                "final": records(report.mode_energy_final),
            },
        )
    summary = (
        f"modecoupling: group={s.group.kind.value} "
        f"offdiagonal_transfer={_cell(report.offdiagonal_transfer)} -> {path}"
    )
    return RunResult(summary, (str(path),))


def _run_lyapunov(s: Scenario, path: Path) -> RunResult:
    sc, state = _lattice_setup(s)
    est = lyapunov_benettin(
        state,
        sc,
        s.evolve,
        delta0=s.chaos.delta0,
        renorm_interval=s.chaos.renorm_interval,
        perturb_seed=s.chaos.perturb_seed,
    )
    if s.output.format == "csv":
        span = est.renorm_interval * est.dt
        rows = (
            (k, (k + 1) * span, logv)
            for k, logv in enumerate(est.per_interval_logs)
        )
        _write_csv(path, ("interval", "t_end", "log_ratio"), rows)
    else:
        _write_json(
            path,
            {
                "command": "lyapunov",
                "name": s.name,
                "lambda": est.lam,
                "converged": est.converged,
                "delta0": est.delta0,
                "renorm_interval": est.renorm_interval,
                "dt": est.dt,
                "per_interval_logs": est.per_interval_logs.tolist(),
            },
        )
    summary = (
        f"lyapunov: lambda={_cell(est.lam)} converged={est.converged} -> {path}"
    )
    return RunResult(summary, (str(path),))


def _run_collapse(s: Scenario, path: Path) -> RunResult:
    cp = s.collapse
    if cp.e_nl_ev is not None:
        e_nl_ev = cp.e_nl_ev
        est = collapse_time(e_nl_ev, DEFAULT_CONSTANTS)
    else:
        sc, state = _lattice_setup(s)
        traj = evolve(state, sc, s.evolve)
        report = energy_report(traj.final_state, sc, s.evolve.g)
        est = lattice_collapse_time(report, cp.energy_scale_ev, DEFAULT_CONSTANTS)
        e_nl_ev = max(report.nonlinear, 0.0) * cp.energy_scale_ev

    outputs = [str(path)]
    hits = None
    if cp.horizon_s is not None:
        hits = hit_process(est.tau_s, cp.horizon_s, cp.seed)

    if s.output.format == "csv":
        _write_csv(
            path,
            ("e_nl_ev", "tau_s", "hit_rate_hz"),
            [(e_nl_ev, est.tau_s, est.hit_rate_hz)],
        )
        if hits is not None:
            hits_path = path.with_name(path.stem + "_hits.csv")
            _write_csv(
                hits_path, ("hit_index", "t_s"), ((k, t) for k, t in enumerate(hits))
            )
            outputs.append(str(hits_path))
    else:
        doc = {
            "command": "collapse",
            "name": s.name,
            "e_nl_ev": e_nl_ev,
            "tau_s": est.tau_s,
            "hit_rate_hz": est.hit_rate_hz,
        }
        if hits is not None:
            doc["horizon_s"] = cp.horizon_s
            doc["hits"] = hits.tolist()
        _write_json(path, doc)

    summary = (
        f"collapse: e_nl_ev={_cell(e_nl_ev)} tau_s={_cell(est.tau_s)} "
        f"hit_rate_hz={_cell(est.hit_rate_hz)}"
    )
    if hits is not None:
        summary += f" hits={len(hits)}"
    summary += f" -> {path}"
    return RunResult(summary, tuple(outputs))


def _run_table(s: Scenario, path: Path) -> RunResult:
    cp = s.collapse
    if cp is not None and cp.presets_path is not None:
        presets = load_presets(cp.presets_path)
    else:
        presets = default_presets()
    try:
        rows = coherence_table(presets, DEFAULT_CONSTANTS)
    except ValueError as exc:
        raise ConfigError(f"table: {exc}") from None
    if s.output.format == "csv":
        _write_csv(
            path,
            ("name", "e_nl_ev", "tau_s", "hit_rate_hz", "coherence_length_m"),
            (
                (
                    r.preset.name,
                    r.preset.e_nl_ev,
                    r.estimate.tau_s,
                    r.estimate.hit_rate_hz,
                    r.estimate.coherence_length_m,
                )
                for r in rows
            ),
        )
    else:
        _write_json(
            path,
            {
                "command": "table",
                "name": s.name,
                "rows": [
                    {
                        "name": r.preset.name,
                        "e_nl_ev": r.preset.e_nl_ev,
                        "tau_s": r.estimate.tau_s,
                        "hit_rate_hz": r.estimate.hit_rate_hz,
                        "coherence_length_m": r.estimate.coherence_length_m,
                        "source": r.preset.source,
                        "strictly_below_previous": r.strictly_below_previous,
                    }
                    for r in rows
                ],
            },
        )
    strictly = all(r.strictly_below_previous for r in rows[1:])
    summary = f"table: systems={len(rows)} strictly_ordered={strictly} -> {path}"
    return RunResult(summary, (str(path),))


def _run_visibility(s: Scenario, path: Path) -> RunResult:
    cp = s.collapse
    est = collapse_time(cp.e_nl_ev, DEFAULT_CONSTANTS)
    v = visibility(cp.flight_time_s, est.tau_s)
    if s.output.format == "csv":
        _write_csv(
            path,
            ("flight_time_s", "tau_s", "visibility"),
            [(cp.flight_time_s, est.tau_s, v)],
        )
    else:
        _write_json(
            path,
            {
                "command": "visibility",
                "name": s.name,
                "flight_time_s": cp.flight_time_s,
                "tau_s": est.tau_s,
                "visibility": v,
            },
        )
    summary = (
        f"visibility: V={_cell(v)} flight_time_s={_cell(cp.flight_time_s)} "
        f"tau_s={_cell(est.tau_s)} -> {path}"
    )
    return RunResult(summary, (str(path),))


_HANDLERS = {
    "evolve": _run_evolve,
    "defect": _run_defect,
    "scaling": _run_scaling,
    "spectrum": _run_spectrum,
    "modecoupling": _run_modecoupling,
    "lyapunov": _run_lyapunov,
    "collapse": _run_collapse,
    "table": _run_table,
    "visibility": _run_visibility,
}


def run_scenario(s: Scenario) -> RunResult:
    """Dispatch a validated scenario and write its artifacts atomically."""
    return _HANDLERS[s.command](s, _out_path(s))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaugelab",
        description=(
            "Lattice laboratory for abelian vs nonabelian classical gauge "
            "dynamics: superposition defects, mode coupling, chaos, and "
            "collapse-time phenomenology."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "evolve": "integrate one state and record the energy series",
        "defect": "superposition-defect series for a state pair",
        "scaling": "defect-vs-coupling sweep with log-log slope",
        "spectrum": "Fourier mode content of a (possibly evolved) state",
        "modecoupling": "energy transfer into initially inactive modes",
        "lyapunov": "largest Lyapunov exponent via two trajectories",
        "collapse": "collapse time from a nonlinear energy (plus hit times)",
        "table": "coherence table over a preset system catalog",
        "visibility": "interference visibility after a flight time",
    }
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, help=help_text[cmd])
        sp.add_argument("--config", required=True, help="scenario TOML path")
        sp.add_argument("--out", help="output path (overrides output.path)")
        sp.add_argument(
            "--format", choices=_FORMATS, help="output format (overrides output.format)"
        )
        sp.add_argument(
            "--seed", type=int, help="override every seed field in the scenario"
        )
        sp.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="dotted-path config edit, e.g. evolve.dt=0.005 (repeatable)",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 4
        scenario = load_scenario(
            text,
            command=args.command,
            overrides=args.override,
            seed=args.seed,
            out=args.out,
            fmt=args.format,
        )
        result = run_scenario(scenario)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    print(result.summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
