#!/usr/bin/env python3
"""Regenerate the stored fixture scenarios and their frozen reference numbers.

Writes tests/fixtures/*.toml (scenario configs exercised by the CLI tests and
the acceptance gate) and tests/fixtures/fixtures.json (oracle and regression
values computed from the library itself, plus parameters that the TOML
scenarios cannot express, like the thermalization leg of the chaos fixture).

The expensive entries are the fine-step defect oracle (10x smaller dt than the
fixture run) and the three Lyapunov estimates; the whole regeneration takes
around a minute on the compiled backend.

Usage:
    python3 tools/gen_fixtures.py           # rewrite fixture files
    python3 tools/gen_fixtures.py --check   # recompute and compare, no writes
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from gaugelab import (  # noqa: E402
    SU2,
    U1,
    EvolveParams,
    InitKind,
    InitSpec,
    LatticeGeometry,
    add_states,
    defect_scaling,
    energy_report,
    evolve,
    lyapunov_benettin,
    make_state,
    mode_coupling,
    structure_constants,
    superposition_defect,
)

FIXTURE_DIR = REPO / "tests" / "fixtures"

# One scenario file per name; texts are parsed verbatim by the CLI tests, so
# keep them in canonical key order (matches gaugelab.cli.scenario_to_toml).
SCENARIOS = {
    "su2_twomode_defect.toml": """\
# Two transverse plane waves in different colors; the stored nonabelian
# superposition-defect fixture.
name = "su2-twomode"
command = "defect"

[group]
kind = "SU2"

[geometry]
extent = [16, 16]

[init_a]
kind = "PlaneWave"
amplitude = 0.25
wave_vector = [1, 0]
color_mask = [0]
direction_mask = [1]

[init_b]
kind = "PlaneWave"
amplitude = 0.25
wave_vector = [0, 1]
color_mask = [1]
direction_mask = [0]

[evolve]
g = 1.0
steps = 1000
dt = 0.01
observe_every = 100
""",
    "u1_random_defect.toml": """\
# Random abelian pair; the defect must stay at roundoff for any coupling.
name = "u1-random"
command = "defect"

[group]
kind = "U1"

[geometry]
extent = [16, 16]

[init_a]
kind = "RandomGaussian"
amplitude = 0.3
seed = 11

[init_b]
kind = "RandomGaussian"
amplitude = 0.3
seed = 12

[evolve]
g = 3.0
steps = 2000
dt = 0.01
observe_every = 200
""",
    "su2_scaling.toml": """\
# Defect-vs-coupling sweep on the two-mode pair; slope fitted over the
# first decade of g.
name = "su2-scaling"
command = "scaling"

[group]
kind = "SU2"

[geometry]
extent = [16, 16]

[init_a]
kind = "PlaneWave"
amplitude = 0.25
wave_vector = [1, 0]
color_mask = [0]
direction_mask = [1]

[init_b]
kind = "PlaneWave"
amplitude = 0.25
wave_vector = [0, 1]
color_mask = [1]
direction_mask = [0]

[evolve]
g = 1.0
steps = 1000
dt = 0.01
observe_every = 100

[scaling]
g_list = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2]
""",
    "u1_modes.toml": """\
# Single plane wave under abelian evolution: no energy may reach new modes.
name = "u1-modes"
command = "modecoupling"

[group]
kind = "U1"

[geometry]
extent = [16, 16]

[init_a]
kind = "PlaneWave"
amplitude = 0.25
wave_vector = [1, 0]
direction_mask = [1]

[evolve]
g = 1.0
steps = 2000
dt = 0.01
observe_every = 100
""",
    "su2_modes.toml": """\
# Two-mode sum under nonabelian evolution: commutator terms pump energy
# into modes absent at t = 0.  Same lattice and horizon as u1_modes.
name = "su2-modes"
command = "modecoupling"

[group]
kind = "SU2"

[geometry]
extent = [16, 16]

[init_a]
kind = "PlaneWave"
amplitude = 0.25
wave_vector = [1, 0]
color_mask = [0]
direction_mask = [1]

[init_b]
kind = "PlaneWave"
amplitude = 0.25
wave_vector = [0, 1]
color_mask = [1]
direction_mask = [0]

[evolve]
g = 1.0
steps = 2000
dt = 0.01
observe_every = 100
""",
    "u1_health.toml": """\
# Random abelian state for the long integrator-health run.
name = "u1-health"
command = "evolve"

[group]
kind = "U1"

[geometry]
extent = [16, 16]

[init_a]
kind = "RandomGaussian"
amplitude = 0.3
seed = 21

[evolve]
g = 1.0
steps = 10000
dt = 0.005
observe_every = 1000
""",
    "su2_health.toml": """\
# Random nonabelian state for the long integrator-health run.
name = "su2-health"
command = "evolve"

[group]
kind = "SU2"

[geometry]
extent = [16, 16]

[init_a]
kind = "RandomGaussian"
amplitude = 0.25
seed = 21

[evolve]
g = 1.0
steps = 10000
dt = 0.005
observe_every = 1000
""",
    "su2_chaos_cli.toml": """\
# Short Lyapunov run used by the CLI tests; the acceptance-grade chaos
# fixture (with its thermalization leg) lives in fixtures.json.
name = "su2-chaos-cli"
command = "lyapunov"

[group]
kind = "SU2"

[geometry]
extent = [8, 8]

[init_a]
kind = "RandomGaussian"
amplitude = 0.5
seed = 5

[evolve]
g = 2.0
steps = 2000
dt = 0.01

[chaos]
delta0 = 1e-8
renorm_interval = 10
perturb_seed = 0
""",
    "qcd_collapse.toml": """\
# Strong-interaction energy scale, 0.2 GeV: the quotable collapse-time
# ballpark.
name = "qcd-collapse"
command = "collapse"

[collapse]
e_nl_ev = 2.0e8
""",
    "presets_table.toml": """\
# Coherence table over the bundled system presets.
name = "presets-table"
command = "table"
""",
    "beam_visibility.toml": """\
# Fringe visibility for a 1 ms flight at a mesoscopic nonlinear energy.
name = "beam-visibility"
command = "visibility"

[collapse]
e_nl_ev = 1.0e-3
flight_time_s = 1.0e-3
""",
}


def _two_mode_pair(geo, group):
    a = make_state(
        geo,
        group,
        InitSpec(
            InitKind.PLANE_WAVE,
            amplitude=0.25,
            wave_vector=(1, 0),
            color_mask=(0,),
            direction_mask=(1,),
        ),
    )
    b = make_state(
        geo,
        group,
        InitSpec(
            InitKind.PLANE_WAVE,
            amplitude=0.25,
            wave_vector=(0, 1),
            color_mask=(1,),
            direction_mask=(0,),
        ),
    )
    return a, b


def compute_numbers() -> dict:
    geo = LatticeGeometry((16, 16))
    sc2 = structure_constants(SU2)
    sc1 = structure_constants(U1)
    out = {}

    # Stored nonabelian defect plus its fine-step oracle (dt / 10, same T).
    sa, sb = _two_mode_pair(geo, SU2)
    p = EvolveParams(g=1.0, steps=1000, dt=0.01, observe_every=100)
    series = superposition_defect(sa, sb, sc2, p)
    fine = superposition_defect(
        sa, sb, sc2, EvolveParams(g=1.0, steps=10000, dt=0.001, observe_every=1000)
    )
    out["su2_twomode_defect"] = {
        "defect_final": float(series.defect[-1]),
        "fine_step_oracle": float(fine.defect[-1]),
        "oracle_rel_tolerance": 0.05,
    }

    # Scaling sweep; slope is fitted over the first decade of g.
    g_list = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2]
    scaling = defect_scaling(sa, sb, sc2, p, g_list)
    out["su2_scaling"] = {
        "g_list": g_list,
        "defects": [d for _, d in scaling.points],
        "slope": scaling.slope,
    }

    # Mode-coupling transfer on identical geometry and horizon.
    pm = EvolveParams(g=1.0, steps=2000, dt=0.01, observe_every=100)
    u1_state = make_state(
        geo,
        U1,
        InitSpec(
            InitKind.PLANE_WAVE,
            amplitude=0.25,
            wave_vector=(1, 0),
            direction_mask=(1,),
        ),
    )
    su2_sum = add_states(*_two_mode_pair(geo, SU2))
    out["mode_transfer"] = {
        "u1": mode_coupling(u1_state, sc1, pm).offdiagonal_transfer,
        "su2": mode_coupling(su2_sum, sc2, pm).offdiagonal_transfer,
        "su2_g0": mode_coupling(
            su2_sum, sc2, EvolveParams(g=0.0, steps=2000, dt=0.01, observe_every=100)
        ).offdiagonal_transfer,
    }

    # Long-run integrator health: drift, reversal, Gauss growth.
    health = {}
    for name, group, sc, amp in (("u1", U1, sc1, 0.3), ("su2", SU2, sc2, 0.25)):
        init = InitSpec(InitKind.RANDOM_GAUSSIAN, amplitude=amp, seed=21)
        state = make_state(geo, group, init)
        rep0 = energy_report(state, sc, 1.0)
        ph = EvolveParams(g=1.0, steps=10000, dt=0.005, observe_every=1000)
        fwd = evolve(state, sc, ph).final_state
        rep1 = energy_report(fwd, sc, 1.0)
        back = evolve(
            type(fwd)(fwd.geometry, fwd.group, fwd.A, -fwd.E, 0.0), sc, ph
        ).final_state
        reversal = math.sqrt(
            float(
                np.sum((back.A - state.A) ** 2) + np.sum((-back.E - state.E) ** 2)
            )
        )
        health[name] = {
            "amplitude": amp,
            "seed": 21,
            "energy_drift": abs(rep1.total - rep0.total) / abs(rep0.total),
            "reversal_error": reversal,
            "gauss_ratio": rep1.gauss_residual_l2 / rep0.gauss_residual_l2,
        }
    out["health"] = health

    # Chaos: near-zero exponents for the linear regimes, a converged positive
    # exponent for strong coupling.  The strong-coupling fixture thermalizes
    # first (drift alarm widened for that leg; leapfrog drift at g = 2,
    # dt = 0.01 oscillates around 2e-3) and then measures at halved dt, which
    # keeps the run far from the non-compact blowup horizon.
    chaos = {
        "u1": {"amplitude": 0.3, "seed": 5, "dt": 0.05, "steps": 20000,
               "renorm_interval": 20, "delta0": 1e-8, "perturb_seed": 0},
        "su2_g0": {"amplitude": 0.3, "seed": 5, "dt": 0.05, "steps": 20000,
                   "renorm_interval": 20, "delta0": 1e-8, "perturb_seed": 0},
        "su2_g2": {
            "amplitude": 0.5, "seed": 5, "g": 2.0,
            "burn_steps": 20000, "burn_dt": 0.01, "burn_drift_alarm": 1e-2,
            "dt": 0.005, "steps": 60000, "renorm_interval": 10,
            "delta0": 1e-8, "perturb_seed": 0,
        },
    }
    for name, group, g in (("u1", U1, 1.0), ("su2_g0", SU2, 0.0)):
        cfg = chaos[name]
        sc = structure_constants(group)
        state = make_state(
            geo,
            group,
            InitSpec(InitKind.RANDOM_GAUSSIAN, amplitude=cfg["amplitude"], seed=cfg["seed"]),
        )
        est = lyapunov_benettin(
            state,
            sc,
            EvolveParams(g=g, steps=cfg["steps"], dt=cfg["dt"]),
            delta0=cfg["delta0"],
            renorm_interval=cfg["renorm_interval"],
            perturb_seed=cfg["perturb_seed"],
        )
        cfg["lam"] = est.lam
    cfg = chaos["su2_g2"]
    state = make_state(
        geo,
        SU2,
        InitSpec(InitKind.RANDOM_GAUSSIAN, amplitude=cfg["amplitude"], seed=cfg["seed"]),
    )
    warm = evolve(
        state,
        sc2,
        EvolveParams(
            g=cfg["g"],
            steps=cfg["burn_steps"],
            dt=cfg["burn_dt"],
            observe_every=cfg["burn_steps"],
            drift_alarm=cfg["burn_drift_alarm"],
        ),
    ).final_state
    mp = EvolveParams(g=cfg["g"], steps=cfg["steps"], dt=cfg["dt"])
    base = lyapunov_benettin(
        warm, sc2, mp,
        delta0=cfg["delta0"],
        renorm_interval=cfg["renorm_interval"],
        perturb_seed=cfg["perturb_seed"],
    )
    cfg["lam"] = base.lam
    cfg["converged"] = base.converged
    out["chaos"] = chaos

    # Quotable collapse time for the strong-interaction scale.
    out["qcd_collapse"] = {
        "e_nl_ev": 2.0e8,
        "tau_s": 6.582119569e-16 / 2.0e8,
    }
    return out


def write_all():
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    for name, text in SCENARIOS.items():
        (FIXTURE_DIR / name).write_text(text, newline="\n")
        print("wrote", FIXTURE_DIR / name)
    numbers = compute_numbers()
    path = FIXTURE_DIR / "fixtures.json"
    with open(path, "w", newline="\n") as fh:
        json.dump(numbers, fh, indent=1)
        fh.write("\n")
    print("wrote", path)


def check_all() -> int:
    stored = json.loads((FIXTURE_DIR / "fixtures.json").read_text())
    fresh = compute_numbers()
    bad = []

    def compare(path, a, b):
        if isinstance(a, dict):
            for k in a:
                compare(f"{path}.{k}", a[k], b.get(k))
        elif isinstance(a, list):
            for i, (x, y) in enumerate(zip(a, b)):
                compare(f"{path}[{i}]", x, y)
        elif isinstance(a, float) and isinstance(b, float):
            # Chaotic quantities amplify last-bit libm differences; a loose
            # band still catches genuine regressions.
            if not math.isclose(a, b, rel_tol=0.2, abs_tol=1e-9):
                bad.append((path, a, b))
        elif a != b:
            bad.append((path, a, b))

    compare("fixtures", fresh, stored)
    for path, a, b in bad:
        print(f"MISMATCH {path}: recomputed {a!r}, stored {b!r}")
    print("check:", "FAIL" if bad else "OK")
    return 1 if bad else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="recompute and compare only")
    args = ap.parse_args()
    if args.check:
        sys.exit(check_all())
    write_all()


if __name__ == "__main__":
    main()
