"""Benettin two-trajectory Lyapunov estimation."""

from __future__ import annotations

import numpy as np
import pytest

from gaugelab import (
    SU2,
    U1,
    DegeneratePerturbationError,
    EvolveParams,
    InitKind,
    InitSpec,
    LatticeGeometry,
    lyapunov_benettin,
    make_state,
    structure_constants,
)

GEO = LatticeGeometry((8, 8))


def _state(group, amp=0.5, seed=5):
    return make_state(
        GEO, group, InitSpec(InitKind.RANDOM_GAUSSIAN, amplitude=amp, seed=seed)
    )


def test_estimate_layout():
    state = _state(SU2)
    p = EvolveParams(g=2.0, steps=205, dt=0.01)
    est = lyapunov_benettin(state, structure_constants(SU2), p, renorm_interval=10)
    assert len(est.per_interval_logs) == 20
    assert est.lam == pytest.approx(
        float(np.mean(est.per_interval_logs)) / (10 * 0.01)
    )
    assert est.delta0 == 1e-8
    assert est.renorm_interval == 10
    assert est.dt == 0.01


def test_deterministic():
    state = _state(SU2)
    p = EvolveParams(g=2.0, steps=300, dt=0.01)
    sc = structure_constants(SU2)
    a = lyapunov_benettin(state, sc, p, perturb_seed=7)
    b = lyapunov_benettin(state, sc, p, perturb_seed=7)
    assert np.array_equal(a.per_interval_logs, b.per_interval_logs)
    c = lyapunov_benettin(state, sc, p, perturb_seed=8)
    assert not np.array_equal(a.per_interval_logs, c.per_interval_logs)


def test_strong_coupling_is_chaotic():
    state = _state(SU2)
    p = EvolveParams(g=2.0, steps=3000, dt=0.01)
    est = lyapunov_benettin(state, structure_constants(SU2), p)
    assert est.lam > 0.05


def test_abelian_exponent_near_zero():
    # linear dynamics separates polynomially, so the finite-time estimate
    # decays like log(T)/T; T = 300 is enough to sit well under the
    # strong-coupling value
    state = _state(U1, amp=0.3)
    p = EvolveParams(g=1.0, steps=6000, dt=0.05)
    est = lyapunov_benettin(state, structure_constants(U1), p, renorm_interval=20)
    assert abs(est.lam) < 0.05


def test_input_state_is_untouched():
    state = _state(SU2)
    before_A = state.A.copy()
    before_E = state.E.copy()
    lyapunov_benettin(
        state, structure_constants(SU2), EvolveParams(g=2.0, steps=100, dt=0.01)
    )
    assert np.array_equal(state.A, before_A)
    assert np.array_equal(state.E, before_E)


def test_delta0_window():
    state = _state(SU2)
    sc = structure_constants(SU2)
    p = EvolveParams(g=1.0, steps=20)
    with pytest.raises(ValueError, match="delta0"):
        lyapunov_benettin(state, sc, p, delta0=1e-12)
    with pytest.raises(ValueError, match="delta0"):
        lyapunov_benettin(state, sc, p, delta0=1e-2)


def test_parameter_validation():
    state = _state(SU2)
    sc = structure_constants(SU2)
    with pytest.raises(ValueError, match="renorm_interval"):
        lyapunov_benettin(state, sc, EvolveParams(g=1.0, steps=20), renorm_interval=0)
    with pytest.raises(ValueError, match="perturb_seed"):
        lyapunov_benettin(state, sc, EvolveParams(g=1.0, steps=20), perturb_seed=-1)
    with pytest.raises(ValueError, match="at least one"):
        lyapunov_benettin(state, sc, EvolveParams(g=1.0, steps=5), renorm_interval=10)
    with pytest.raises(ValueError, match="structure constants"):
        lyapunov_benettin(state, structure_constants(U1), EvolveParams(g=1.0, steps=20))


def test_zero_state_rejected():
    zero = make_state(GEO, SU2, InitSpec(InitKind.ZERO))
    with pytest.raises(DegeneratePerturbationError):
        lyapunov_benettin(
            zero, structure_constants(SU2), EvolveParams(g=1.0, steps=20)
        )


def test_convergence_flag_requires_four_intervals():
    state = _state(SU2)
    p = EvolveParams(g=2.0, steps=30, dt=0.01)
    est = lyapunov_benettin(state, structure_constants(SU2), p, renorm_interval=10)
    assert len(est.per_interval_logs) == 3
    assert est.converged is False
