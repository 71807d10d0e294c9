"""Deterministic symplectic time evolution in temporal gauge.

The equations of motion are the Hamiltonian pair

    dA_i^a/dt = E_i^a
    dE_i^a/dt = sum_j [ D_j F_ji^a - g f_abc A_j^b F_ji^c ]

integrated with kick-drift-kick leapfrog (velocity Verlet).  The integrator is
exactly time-reversible up to roundoff and keeps the total energy in bounded
oscillation instead of drifting, which is what makes long nonlinear-energy
measurements trustworthy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gaugelab import kernels
from gaugelab.algebra import StructureConstants
from gaugelab.errors import BlowupError, EnergyDriftError
from gaugelab.lattice import (
    EnergyReport,
    FieldState,
    _require_finite,
    energy_report,
    kernel_tables,
)

# Hard stability guard: lattice frequencies are O(1) in lattice units, so a
# step beyond this is asking for blowup unless the caller says so explicitly.
MAX_SAFE_DT = 0.1


@dataclass(frozen=True)
class EvolveParams:
    g: float
    steps: int
    dt: float = 0.01
    observe_every: int = 10
    allow_large_dt: bool = False
    drift_alarm: float = 1e-3

    def __post_init__(self):
        if not (math.isfinite(self.g) and self.g >= 0.0):
            raise ValueError(f"coupling g must be finite and >= 0, got {self.g}")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.dt > MAX_SAFE_DT and not self.allow_large_dt:
            raise ValueError(
                f"dt={self.dt} exceeds the stability guard {MAX_SAFE_DT}; "
                "set allow_large_dt to override"
            )
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.observe_every < 1:
            raise ValueError(f"observe_every must be >= 1, got {self.observe_every}")
        if not (math.isfinite(self.drift_alarm) and self.drift_alarm > 0.0):
            raise ValueError("drift_alarm must be positive")


@dataclass(eq=False)
class TrajectorySummary:
    times: np.ndarray
    energy_total: np.ndarray
    energy_nonlinear: np.ndarray
    gauss_residual: np.ndarray
    final_state: FieldState


def eom_rhs(state: FieldState, sc: StructureConstants, g: float) -> np.ndarray:
    """dE/dt for the given state; shape matches state.E."""
    _require_same_group(state, sc)
    _require_finite(state)
    tables = kernel_tables(state.geometry, sc)
    return kernels.eom_rhs(state.A, float(g), tables)


def _require_same_group(state: FieldState, sc: StructureConstants):
    if state.group != sc.group:
        raise ValueError(
            f"state group {state.group.kind.value} does not match "
            f"structure-constant group {sc.group.kind.value}"
        )


def leapfrog_step(
    state: FieldState, sc: StructureConstants, p: EvolveParams
) -> FieldState:
    """One kick-drift-kick step; returns a new state at time + dt."""
    _require_same_group(state, sc)
    _require_finite(state)
    tables = kernel_tables(state.geometry, sc)
    A = state.A.copy()
    E = state.E.copy()
    bad = kernels.leapfrog_steps(A, E, 1, float(p.dt), float(p.g), tables)
    if bad >= 0:
        raise BlowupError(step=bad + 1)
    return FieldState(state.geometry, state.group, A, E, state.time + p.dt)


def evolve(
    state: FieldState, sc: StructureConstants, p: EvolveParams
) -> TrajectorySummary:
    """Run `p.steps` leapfrog steps, recording observables every
    `p.observe_every` steps (the initial state included).

    Bit-identical for identical inputs.  Raises BlowupError on the first
    non-finite step and EnergyDriftError when the total energy leaves the
    `p.drift_alarm` relative band around its initial value.
    """
    _require_same_group(state, sc)
    _require_finite(state)
    tables = kernel_tables(state.geometry, sc)
    A = state.A.copy()
    E = state.E.copy()
    t0 = state.time

    n_obs = p.steps // p.observe_every
    times = np.zeros(n_obs + 1)
    e_total = np.zeros(n_obs + 1)
    e_nl = np.zeros(n_obs + 1)
    gauss = np.zeros(n_obs + 1)

    def record(k, step, report):
        times[k] = t0 + step * p.dt
        e_total[k] = report.total
        e_nl[k] = report.nonlinear
        gauss[k] = report.gauss_residual_l2

    def report_at(step):
        snapshot = FieldState(
            state.geometry, state.group, A, E, t0 + step * p.dt
        )
        return energy_report(snapshot, sc, p.g)

    first = report_at(0)
    record(0, 0, first)
    h0 = first.total
    done = 0
    for k in range(1, n_obs + 1):
        bad = kernels.leapfrog_steps(
            A, E, p.observe_every, float(p.dt), float(p.g), tables
        )
        if bad >= 0:
            raise BlowupError(step=done + bad + 1)
        done += p.observe_every
        rep = report_at(done)
        record(k, done, rep)
        drift = abs(rep.total - h0) / max(abs(h0), 1e-300)
        if h0 > 0.0 and drift > p.drift_alarm:
            raise EnergyDriftError(step=done, drift=drift, threshold=p.drift_alarm)
    remainder = p.steps - done
    if remainder > 0:
        bad = kernels.leapfrog_steps(A, E, remainder, float(p.dt), float(p.g), tables)
        if bad >= 0:
            raise BlowupError(step=done + bad + 1)

    final = FieldState(state.geometry, state.group, A, E, t0 + p.steps * p.dt)
    return TrajectorySummary(
        times=times,
        energy_total=e_total,
        energy_nonlinear=e_nl,
        gauss_residual=gauss,
        final_state=final,
    )
