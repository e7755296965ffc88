import math

import numpy as np
import pytest

from sawfocus.beam import BeamParams
from sawfocus.resonator import (
    AutocollimationError,
    MirrorModel,
    ModeId,
    Resonance,
    ResonanceSet,
    ResonatorSpec,
    calibrate_mirror_reflectivity,
    diffraction_q,
    free_spectral_range,
    mirror_effective_length,
    resonance_frequency,
    round_trip_phase_solve,
    synthesize_s21,
    thickness_shift,
    transverse_splitting,
)

VP = 4300.0


class TestModeId:
    def test_validation(self):
        ModeId(1, 0)
        with pytest.raises(ValueError):
            ModeId(0, 0)
        with pytest.raises(ValueError):
            ModeId(3, -1)


class TestResonanceFrequency:
    def test_planar_limit(self, device_spec):
        # Huge waist: x_R -> infinity, arctan -> 0, plain half-wave stack.
        wide = BeamParams(2e-6, 1.0)
        f = resonance_frequency(device_spec, wide, VP, ModeId(40, 3))
        assert f == pytest.approx(40 * VP / (2 * 33.6e-6), rel=1e-9)

    def test_tight_focus_limit(self, device_spec):
        # d/(2 x_R) huge: arctan -> pi/2 and the index becomes n + l + 1/2.
        tight = BeamParams(2e-6, 2e-9)
        f = resonance_frequency(device_spec, tight, VP, ModeId(40, 3))
        assert f == pytest.approx((40 + 3 + 0.5) * VP / (2 * 33.6e-6),
                                  rel=1e-5)

    def test_against_phase_solver(self, device_spec, device_beam):
        mode = ModeId(67, 0)
        closed = resonance_frequency(device_spec, device_beam, VP, mode)
        solved = round_trip_phase_solve(device_spec, device_beam, VP, mode)
        assert abs(solved - closed) / closed < 1e-9

    def test_solver_monotone_in_n(self, device_spec, device_beam):
        fs = [round_trip_phase_solve(device_spec, device_beam, VP,
                                     ModeId(n, 2)) for n in (30, 31, 32)]
        assert fs[0] < fs[1] < fs[2]


class TestTransverseSplitting:
    def test_l0_is_zero(self, device_spec, device_beam):
        assert transverse_splitting(device_spec, device_beam, VP, 0) == 0.0

    def test_difference_identity(self, device_spec, device_beam):
        # f(n,l) - f(n,0) collapses to the splitting for every n.
        for n in (10, 33, 80):
            for l in (1, 2, 4, 12):
                diff = (resonance_frequency(device_spec, device_beam, VP,
                                            ModeId(n, l))
                        - resonance_frequency(device_spec, device_beam, VP,
                                              ModeId(n, 0)))
                split = transverse_splitting(device_spec, device_beam, VP, l)
                assert abs(diff - split) / split < 1e-12

    def test_monotone_in_waist_and_order(self, device_spec):
        w0s = np.linspace(2e-6, 10e-6, 33)
        for l in (2, 4, 8, 12):
            vals = [transverse_splitting(device_spec, BeamParams(2e-6, w0),
                                         VP, l) for w0 in w0s]
            assert all(a > b for a, b in zip(vals, vals[1:]))
        for w0 in (2e-6, 5e-6, 10e-6):
            beam = BeamParams(2e-6, w0)
            vals = [transverse_splitting(device_spec, beam, VP, l)
                    for l in (2, 4, 8, 12)]
            assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_planar_degeneracy(self, device_spec):
        # Very wide beams leave the transverse ladder nearly degenerate.
        assert transverse_splitting(device_spec, BeamParams(2e-6, 0.1),
                                    VP, 12) < 1.0


class TestFreeSpectralRange:
    def test_value_and_mismatch_diagnostic(self):
        fsr = free_spectral_range(VP, 33.6e-6)
        assert fsr == pytest.approx(63.988e6, rel=1e-3)
        # The measured fundamental spacing is nearer 80 MHz; the model
        # reports the residual rather than absorbing it.
        residual = 80e6 - fsr
        assert 15e6 < residual < 17e6


class TestDiffractionQ:
    def test_isotropic_unit_aperture(self):
        assert diffraction_q(0.0, 2e-6, 2e-6) == 5.0 * math.pi

    def test_anisotropic_device_value(self):
        q = diffraction_q(-0.45, 4e-6, 2e-6)
        assert abs(q - 5.0 * math.pi / 0.55 * 4.0) / q < 1e-6

    def test_quadratic_width_scaling(self):
        q1 = diffraction_q(-0.3, 3e-6, 2e-6)
        q2 = diffraction_q(-0.3, 6e-6, 2e-6)
        assert q2 == pytest.approx(4.0 * q1, rel=1e-12)

    def test_autocollimation_error(self):
        with pytest.raises(AutocollimationError):
            diffraction_q(-1.0, 4e-6, 2e-6)
        assert issubclass(AutocollimationError, ZeroDivisionError)


class TestThicknessShift:
    def test_zero(self):
        assert thickness_shift(-4.5e14, 0.0) == 0.0

    def test_device_numbers(self):
        # -0.45 MHz/nm over 20 nm is exactly -9 MHz.
        assert thickness_shift(-4.5e14, 20e-9) == -9e6

    def test_linearity(self):
        assert thickness_shift(-4.5e14, 40e-9) == 2.0 * thickness_shift(
            -4.5e14, 20e-9)


class TestMirrorModel:
    def test_penetration_length(self):
        m = MirrorModel(reflectivity_per_period=0.1, stopband_center=2.15e9,
                        pitch=1e-6)
        assert m.penetration_length == pytest.approx(1e-6 / 0.4, rel=1e-12)

    def test_hard_mirror_limit(self):
        m = MirrorModel(reflectivity_per_period=1.0 - 1e-12,
                        stopband_center=2.15e9, pitch=1e-6)
        assert m.penetration_length == pytest.approx(0.25e-6, rel=1e-9)

    def test_reflectivity_bounds(self):
        with pytest.raises(ValueError):
            MirrorModel(reflectivity_per_period=0.0, stopband_center=2e9,
                        pitch=1e-6)
        with pytest.raises(ValueError):
            MirrorModel(reflectivity_per_period=1.5, stopband_center=2e9,
                        pitch=1e-6)

    def test_calibration_round_trip(self):
        rs = calibrate_mirror_reflectivity(33.6e-6, 29e-6, 1e-6)
        m = MirrorModel(reflectivity_per_period=rs, stopband_center=2.15e9,
                        pitch=1e-6)
        d = mirror_effective_length(m, 29e-6, 1e-6)
        assert abs(d - 33.6e-6) / 33.6e-6 < 1e-14

    def test_stopband_width_model(self):
        m = MirrorModel(reflectivity_per_period=0.10869565217391312,
                        stopband_center=2.15e9, pitch=1e-6)
        assert m.stopband_width == pytest.approx(
            2.15e9 * 2.0 * m.reflectivity_per_period / math.pi, rel=1e-12)


class TestResonanceContainers:
    def test_resonance_validation(self):
        Resonance(ModeId(1, 0), 2e9, 1000.0, 5000.0, math.inf)
        with pytest.raises(ValueError):
            Resonance(ModeId(1, 0), -2e9, 1000.0, 5000.0, 5000.0)
        with pytest.raises(ValueError):
            Resonance(ModeId(1, 0), 2e9, 0.0, 5000.0, 5000.0)

    def test_set_sorts_and_rejects_empty(self):
        a = Resonance(ModeId(2, 0), 2.2e9, 1e3, 8e3, 8e3)
        b = Resonance(ModeId(1, 0), 2.1e9, 1e3, 8e3, 8e3)
        rs = ResonanceSet([a, b])
        assert [r.frequency for r in rs] == [2.1e9, 2.2e9]
        with pytest.raises(ValueError):
            ResonanceSet([])


class TestSynthesizeS21:
    def test_critical_coupling_unity(self):
        # Lossless and symmetric: kappa_1 = kappa_2 = kappa_tot / 2, so on
        # resonance |S21| is exactly 1.
        res = Resonance(ModeId(1, 0), 2e9, math.inf, 4000.0, 4000.0)
        grid = np.array([1.99e9, 2e9, 2.01e9])
        s21 = synthesize_s21([res], grid)
        assert abs(s21[1]) == pytest.approx(1.0, rel=1e-12)

    def test_far_detuning_vanishes(self):
        res = Resonance(ModeId(1, 0), 2e9, 2e3, 8e3, 8e3)
        on_resonance = abs(synthesize_s21([res], np.array([2e9]))[0])
        far = np.abs(synthesize_s21([res], np.array([1e9, 3e9])))
        assert np.all(far < 1e-3 * on_resonance)

    def test_passivity_on_grid(self):
        modes = [Resonance(ModeId(n, 0), 2e9 + n * 5e7, 2e3, 8e3, 8e3)
                 for n in range(1, 6)]
        grid = np.linspace(1.9e9, 2.4e9, 4001)
        s21 = synthesize_s21(modes, grid)
        assert np.max(np.abs(s21)) <= 1.0

    def test_grid_validation(self):
        res = Resonance(ModeId(1, 0), 2e9, 2e3, 8e3, 8e3)
        with pytest.raises(ValueError):
            synthesize_s21([res], np.array([2e9, 1.9e9]))
        with pytest.raises(ValueError):
            synthesize_s21([res], np.array([]))


class TestResonatorSpecValidation:
    def test_rejects_bad_geometry(self):
        with pytest.raises(ValueError):
            ResonatorSpec(-1e-6, 1e-6, 5, 200)
        with pytest.raises(ValueError):
            ResonatorSpec(33.6e-6, 1e-6, 0, 200)
        with pytest.raises(ValueError):
            ResonatorSpec(33.6e-6, 1e-6, 5, 200, aperture_rule="bogus")
        with pytest.raises(ValueError):
            ResonatorSpec(33.6e-6, 1e-6, 5, 200, port_coupling=(1.0,))
