"""Superposition defect, coupling scaling, and Fourier-mode diagnostics."""

from __future__ import annotations

import numpy as np
import pytest

from gaugelab import (
    SU2,
    U1,
    BlowupError,
    EvolveParams,
    FieldState,
    InitKind,
    InitSpec,
    LatticeGeometry,
    add_states,
    defect_scaling,
    make_state,
    mode_coupling,
    mode_spectrum,
    scale_state,
    superposition_defect,
    structure_constants,
)

GEO = LatticeGeometry((16, 16))


def _two_mode_pair(group=SU2, amplitude=0.25):
    a = make_state(
        GEO,
        group,
        InitSpec(
            InitKind.PLANE_WAVE, amplitude=amplitude, wave_vector=(1, 0),
            color_mask=(0,), direction_mask=(1,),
        ),
    )
    b = make_state(
        GEO,
        group,
        InitSpec(
            InitKind.PLANE_WAVE, amplitude=amplitude, wave_vector=(0, 1),
            color_mask=(1,), direction_mask=(0,),
        ),
    )
    return a, b


def _random_pair(group, seed_a=11, seed_b=12, amp=0.3):
    a = make_state(
        GEO, group, InitSpec(InitKind.RANDOM_GAUSSIAN, amplitude=amp, seed=seed_a)
    )
    b = make_state(
        GEO, group, InitSpec(InitKind.RANDOM_GAUSSIAN, amplitude=amp, seed=seed_b)
    )
    return a, b


class TestDefect:
    def test_series_layout(self):
        a, b = _two_mode_pair()
        p = EvolveParams(g=1.0, steps=100, dt=0.01, observe_every=25)
        series = superposition_defect(a, b, structure_constants(SU2), p)
        assert np.allclose(series.times, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert series.defect[0] == 0.0
        assert np.all(series.norm_a > 0) and np.all(series.norm_b > 0)

    def test_abelian_defect_at_roundoff(self):
        a, b = _random_pair(U1)
        p = EvolveParams(g=4.0, steps=500, dt=0.01, observe_every=100)
        series = superposition_defect(a, b, structure_constants(U1), p)
        assert np.max(series.defect) <= 1e-12

    def test_nonabelian_g0_defect_at_roundoff(self):
        a, b = _random_pair(SU2)
        p = EvolveParams(g=0.0, steps=500, dt=0.01, observe_every=100)
        series = superposition_defect(a, b, structure_constants(SU2), p)
        assert np.max(series.defect) <= 1e-12

    def test_nonabelian_defect_grows(self, frozen):
        a, b = _two_mode_pair()
        p = EvolveParams(g=1.0, steps=1000, dt=0.01, observe_every=100)
        series = superposition_defect(a, b, structure_constants(SU2), p)
        assert series.defect[-1] > 1e-3
        assert np.all(series.defect[1:] > 0)
        stored = frozen["su2_twomode_defect"]["defect_final"]
        assert series.defect[-1] == pytest.approx(stored, rel=1e-6)

    def test_swap_symmetry_is_bitwise(self):
        a, b = _two_mode_pair()
        p = EvolveParams(g=1.0, steps=200, dt=0.01, observe_every=50)
        sc = structure_constants(SU2)
        ab = superposition_defect(a, b, sc, p)
        ba = superposition_defect(b, a, sc, p)
        assert np.array_equal(ab.defect, ba.defect)
        assert np.array_equal(ab.norm_a, ba.norm_b)

    def test_single_color_su2_stays_linear(self):
        # both states in one color: every commutator vanishes, so nonabelian
        # evolution acts linearly on this subspace
        a = make_state(
            GEO,
            SU2,
            InitSpec(
                InitKind.PLANE_WAVE, amplitude=0.25, wave_vector=(1, 0),
                color_mask=(0,), direction_mask=(1,),
            ),
        )
        b = make_state(
            GEO,
            SU2,
            InitSpec(
                InitKind.PLANE_WAVE, amplitude=0.25, wave_vector=(0, 1),
                color_mask=(0,), direction_mask=(0,),
            ),
        )
        p = EvolveParams(g=1.0, steps=500, dt=0.01, observe_every=100)
        series = superposition_defect(a, b, structure_constants(SU2), p)
        assert np.max(series.defect) <= 1e-12

    def test_amplitude_doubling_matches_coupling_doubling(self):
        # the commutator term enters as g * A * A, so doubling both
        # amplitudes at fixed g must match doubling g at fixed amplitude
        # to leading order in the defect
        sc = structure_constants(SU2)
        p = EvolveParams(g=0.001, steps=400, dt=0.01, observe_every=400)
        a, b = _two_mode_pair()
        base = superposition_defect(a, b, sc, p).defect[-1]
        big_amp = superposition_defect(
            scale_state(a, 2.0), scale_state(b, 2.0), sc, p
        ).defect[-1]
        big_g = superposition_defect(
            a, b, sc, EvolveParams(g=0.002, steps=400, dt=0.01, observe_every=400)
        ).defect[-1]
        assert big_amp / base == pytest.approx(big_g / base, rel=0.05)
        assert big_g / base == pytest.approx(2.0, rel=0.1)

    def test_rejects_mismatched_pair(self):
        a, _ = _two_mode_pair()
        other = make_state(
            LatticeGeometry((8, 8)), SU2, InitSpec(InitKind.ZERO)
        )
        p = EvolveParams(g=1.0, steps=10)
        with pytest.raises(ValueError, match="geometry"):
            superposition_defect(a, other, structure_constants(SU2), p)
        b = make_state(GEO, U1, InitSpec(InitKind.ZERO))
        with pytest.raises(ValueError):
            superposition_defect(a, b, structure_constants(SU2), p)

    def test_rejects_wrong_structure_constants(self):
        a, b = _two_mode_pair()
        with pytest.raises(ValueError, match="structure constants"):
            superposition_defect(
                a, b, structure_constants(U1), EvolveParams(g=1.0, steps=10)
            )

    def test_rejects_nonzero_start_time(self):
        a, b = _two_mode_pair()
        shifted = FieldState(a.geometry, a.group, a.A, a.E, 1.0)
        with pytest.raises(ValueError, match="time 0"):
            superposition_defect(
                shifted, b, structure_constants(SU2), EvolveParams(g=1.0, steps=10)
            )

    def test_rejects_degenerate_pair(self):
        z = make_state(GEO, SU2, InitSpec(InitKind.ZERO))
        with pytest.raises(ValueError, match="degenerate"):
            superposition_defect(
                z, z.copy(), structure_constants(SU2), EvolveParams(g=1.0, steps=10)
            )

    def test_blowup_names_the_trajectory(self):
        a, b = _random_pair(SU2, amp=1.5)
        p = EvolveParams(
            g=3.0, steps=400, dt=1.0, observe_every=100, allow_large_dt=True
        )
        with pytest.raises(BlowupError, match="trajectory"):
            superposition_defect(a, b, structure_constants(SU2), p)


class TestScaling:
    def test_fixture_slope(self, frozen):
        a, b = _two_mode_pair()
        p = EvolveParams(g=1.0, steps=1000, dt=0.01, observe_every=100)
        stored = frozen["su2_scaling"]
        result = defect_scaling(
            a, b, structure_constants(SU2), p, stored["g_list"]
        )
        assert result.slope == pytest.approx(stored["slope"], rel=1e-6)
        assert result.slope == pytest.approx(1.0, abs=0.2)
        for (g, d), d_stored in zip(result.points, stored["defects"]):
            assert d == pytest.approx(d_stored, rel=1e-6)

    def test_abelian_slope_is_none(self):
        a, b = _random_pair(U1)
        p = EvolveParams(g=1.0, steps=200, dt=0.01, observe_every=200)
        result = defect_scaling(
            a, b, structure_constants(U1), p, [0.001, 0.01, 0.1]
        )
        assert result.slope is None
        assert all(d <= 1e-10 for _, d in result.points)

    def test_g_list_validation(self):
        a, b = _two_mode_pair()
        sc = structure_constants(SU2)
        p = EvolveParams(g=1.0, steps=10)
        with pytest.raises(ValueError):
            defect_scaling(a, b, sc, p, [])
        with pytest.raises(ValueError):
            defect_scaling(a, b, sc, p, [0.01, 0.001])
        with pytest.raises(ValueError):
            defect_scaling(a, b, sc, p, [0.0, 0.01])
        with pytest.raises(ValueError):
            defect_scaling(a, b, sc, p, [-0.01, 0.01])


class TestModeSpectrum:
    def test_plane_wave_modes(self):
        state = make_state(
            GEO,
            U1,
            InitSpec(
                InitKind.PLANE_WAVE, amplitude=0.5, wave_vector=(1, 0),
                direction_mask=(1,),
            ),
        )
        spec = mode_spectrum(state)
        assert [(k, d, c) for k, d, c, _ in spec.modes] == [
            ((-1, 0), 1, 0),
            ((1, 0), 1, 0),
        ]
        # cos splits evenly between +k and -k; Parseval fixes the scale
        assert spec.total_power == pytest.approx(float(np.sum(state.A**2)))

    def test_zero_state_has_no_modes(self):
        state = make_state(GEO, SU2, InitSpec(InitKind.ZERO))
        spec = mode_spectrum(state)
        assert spec.modes == []
        assert spec.total_power == 0.0

    def test_parseval_on_random_state(self):
        state = make_state(
            GEO, SU2, InitSpec(InitKind.RANDOM_GAUSSIAN, amplitude=0.3, seed=3)
        )
        spec = mode_spectrum(state)
        assert spec.total_power == pytest.approx(float(np.sum(state.A**2)))


class TestModeCoupling:
    def test_abelian_no_transfer(self, frozen):
        state = make_state(
            GEO,
            U1,
            InitSpec(
                InitKind.PLANE_WAVE, amplitude=0.25, wave_vector=(1, 0),
                direction_mask=(1,),
            ),
        )
        p = EvolveParams(g=1.0, steps=2000, dt=0.01, observe_every=100)
        report = mode_coupling(state, structure_constants(U1), p)
        assert report.offdiagonal_transfer <= 1e-20
        assert report.offdiagonal_transfer == pytest.approx(
            frozen["mode_transfer"]["u1"], abs=1e-20
        )

    def test_nonabelian_transfer(self, frozen):
        state = add_states(*_two_mode_pair())
        p = EvolveParams(g=1.0, steps=2000, dt=0.01, observe_every=100)
        report = mode_coupling(state, structure_constants(SU2), p)
        assert report.offdiagonal_transfer > 1e-4
        assert report.offdiagonal_transfer == pytest.approx(
            frozen["mode_transfer"]["su2"], rel=1e-6
        )
        # the commutator of the two seeded colors populates the third color
        # at the sum and difference wave vectors
        new_modes = set(report.mode_energy_final) - set(report.mode_energy_initial)
        new_keys = {(k, c) for (k, _, c) in new_modes}
        assert any(k in (((1, 1)), ((1, -1))) and c == 2 for k, c in new_keys)

    def test_nonabelian_g0_no_transfer(self):
        state = add_states(*_two_mode_pair())
        p = EvolveParams(g=0.0, steps=2000, dt=0.01, observe_every=100)
        report = mode_coupling(state, structure_constants(SU2), p)
        assert report.offdiagonal_transfer <= 1e-20

    def test_initial_energy_map_matches_spectrum(self):
        state = add_states(*_two_mode_pair())
        p = EvolveParams(g=1.0, steps=10, dt=0.01)
        report = mode_coupling(state, structure_constants(SU2), p)
        spec = mode_spectrum(state)
        assert set(report.mode_energy_initial) == {
            (k, d, c) for k, d, c, _ in spec.modes
        }
