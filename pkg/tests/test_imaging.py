import math

import numpy as np
import pytest

from sawfocus.beam import render_field
from sawfocus.imaging import (
    ClassificationError,
    FitError,
    ScanFormatError,
    ScanImage,
    classify_mode,
    fit_waist,
    load_scan,
    make_synthetic_scan,
    save_scan,
    wrap_phase,
)

from conftest import DATA_DIR


def waist_grid(half_span=6e-6, step=0.25e-6):
    n = int(round(half_span / step))
    return np.arange(-n, n + 1) * step


@pytest.fixture()
def scan_l0(device_beam, love_profile):
    return make_synthetic_scan(device_beam, love_profile, 0,
                               np.array([0.0]), waist_grid())


class TestWrapPhase:
    def test_values(self):
        assert wrap_phase(3.0 * math.pi / 2.0) == pytest.approx(
            -math.pi / 2.0, rel=1e-12)
        assert wrap_phase(math.pi) == math.pi
        assert wrap_phase(-math.pi) == math.pi
        assert wrap_phase(0.0) == 0.0

    def test_array_range(self):
        phis = np.linspace(-20.0, 20.0, 1001)
        wrapped = wrap_phase(phis)
        assert np.all(wrapped > -math.pi) and np.all(wrapped <= math.pi)
        np.testing.assert_allclose(np.exp(1j * wrapped), np.exp(1j * phis),
                                   atol=1e-12)


class TestScanIo:
    def test_round_trip(self, tmp_path):
        img = ScanImage(np.array([0.0, 1e-6]), np.array([0.0, 2e-6]),
                        np.array([[0.1, 0.2], [0.3, 0.4]]),
                        np.array([[0.0, 1.0], [-1.0, 3.0]]))
        path = tmp_path / "scan.csv"
        save_scan(img, path)
        back = load_scan(path)
        np.testing.assert_array_equal(back.x_grid, img.x_grid)
        np.testing.assert_array_equal(back.y_grid, img.y_grid)
        np.testing.assert_array_equal(back.amplitude, img.amplitude)
        np.testing.assert_array_equal(back.phase, img.phase)

    def test_save_is_byte_stable(self, tmp_path, scan_l0):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        save_scan(scan_l0, p1)
        save_scan(load_scan(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_phase_wrapped_on_load(self, tmp_path):
        path = tmp_path / "scan.csv"
        path.write_text("x_m,y_m,amplitude,phase_rad\n"
                        "0.0,0.0,1.0,4.71238898038469\n")
        img = load_scan(path)
        assert img.phase[0, 0] == pytest.approx(-math.pi / 2.0, rel=1e-12)

    def test_dc_column(self, tmp_path):
        path = tmp_path / "scan.csv"
        path.write_text("x_m,y_m,amplitude,phase_rad,dc_w\n"
                        "0.0,0.0,1.0,0.5,2e-3\n")
        img = load_scan(path)
        assert img.dc_power[0, 0] == 2e-3

    def test_bad_header(self, tmp_path):
        path = tmp_path / "scan.csv"
        path.write_text("x,y,a,p\n0,0,1,0\n")
        with pytest.raises(ScanFormatError, match="line 1"):
            load_scan(path)

    def test_bad_value_line_numbered(self, tmp_path):
        path = tmp_path / "scan.csv"
        path.write_text("x_m,y_m,amplitude,phase_rad\n"
                        "0.0,0.0,1.0,0.0\n"
                        "1e-6,0.0,oops,0.0\n")
        with pytest.raises(ScanFormatError, match="line 3"):
            load_scan(path)

    def test_ragged_grid_rejected(self, tmp_path):
        path = tmp_path / "scan.csv"
        path.write_text("x_m,y_m,amplitude,phase_rad\n"
                        "0.0,0.0,1.0,0.0\n"
                        "1e-6,0.0,1.0,0.0\n"
                        "0.0,1e-6,1.0,0.0\n")
        with pytest.raises(ScanFormatError):
            load_scan(path)

    def test_negative_amplitude_rejected(self, tmp_path):
        path = tmp_path / "scan.csv"
        path.write_text("x_m,y_m,amplitude,phase_rad\n0.0,0.0,-1.0,0.0\n")
        with pytest.raises((ScanFormatError, ValueError)):
            load_scan(path)

    def test_shipped_scan_regenerates(self, device_beam, love_profile):
        # The checked-in scan is fully reproducible from the generator with
        # its documented grid, seed, and noise level.
        shipped = load_scan(DATA_DIR / "synthetic_scan_l0.csv")
        regen = make_synthetic_scan(
            device_beam, love_profile, 0,
            np.arange(-8, 9) * 0.25e-6, np.arange(-24, 25) * 0.25e-6,
            noise=0.1, seed=7)
        np.testing.assert_array_equal(shipped.amplitude, regen.amplitude)
        np.testing.assert_array_equal(shipped.phase, regen.phase)


class TestMakeSyntheticScan:
    def test_noiseless_matches_render(self, device_beam, love_profile):
        ys = waist_grid()
        scan = make_synthetic_scan(device_beam, love_profile, 2,
                                   np.array([0.0]), ys)
        fmap = render_field(device_beam, love_profile, 2, np.array([0.0]),
                            ys)
        np.testing.assert_allclose(scan.amplitude, np.abs(fmap.values),
                                   rtol=0, atol=1e-15)

    def test_seed_determinism(self, device_beam, love_profile):
        kw = dict(noise=0.1, seed=11)
        a = make_synthetic_scan(device_beam, love_profile, 0,
                                np.array([0.0]), waist_grid(), **kw)
        b = make_synthetic_scan(device_beam, love_profile, 0,
                                np.array([0.0]), waist_grid(), **kw)
        np.testing.assert_array_equal(a.amplitude, b.amplitude)


class TestFitWaist:
    def test_noiseless_recovery(self, scan_l0):
        fit = fit_waist(scan_l0, 0.0)
        assert abs(fit.w0_est - 2e-6) / 2e-6 < 1e-3
        assert fit.residual_rms < 1e-10
        assert not fit.peak_at_edge

    def test_scale_invariance(self, scan_l0):
        base = fit_waist(scan_l0, 0.0)
        scaled = ScanImage(scan_l0.x_grid, scan_l0.y_grid,
                           1234.5 * scan_l0.amplitude, scan_l0.phase)
        fit = fit_waist(scaled, 0.0)
        assert abs(fit.w0_est - base.w0_est) / base.w0_est < 1e-9
        assert fit.amplitude_scale == pytest.approx(
            1234.5 * base.amplitude_scale, rel=1e-6)

    def test_translation_shifts_center_only(self, device_beam,
                                            love_profile):
        ys = waist_grid()
        scan = make_synthetic_scan(device_beam, love_profile, 0,
                                   np.array([0.0]), ys)
        shifted = ScanImage(scan.x_grid, scan.y_grid + 1.5e-6,
                            scan.amplitude, scan.phase)
        base = fit_waist(scan, 0.0)
        fit = fit_waist(shifted, 0.0)
        assert abs(fit.w0_est - base.w0_est) / base.w0_est < 1e-9
        assert fit.center_y == pytest.approx(base.center_y + 1.5e-6,
                                             abs=1e-12)

    def test_peak_at_edge_flagged(self, device_beam, love_profile):
        ys = np.arange(0, 17) * 0.25e-6  # one-sided window
        scan = make_synthetic_scan(device_beam, love_profile, 0,
                                   np.array([0.0]), ys)
        fit = fit_waist(scan, 0.0)
        assert fit.peak_at_edge

    def test_slice_outside_span(self, scan_l0):
        with pytest.raises(ValueError):
            fit_waist(scan_l0, 1e-3)

    def test_degenerate_image(self):
        img = ScanImage(np.array([0.0]), np.linspace(-2e-6, 2e-6, 9),
                        np.zeros((9, 1)), np.zeros((9, 1)))
        with pytest.raises(FitError):
            fit_waist(img, 0.0)

    def test_report_dict(self, scan_l0):
        d = fit_waist(scan_l0, 0.0).to_dict()
        for key in ("w0_est", "w0_err", "center_y", "amplitude_scale",
                    "offset", "residual_rms", "peak_at_edge"):
            assert key in d


class TestClassifyMode:
    def test_fundamental(self, device_beam, love_profile, scan_l0):
        result = classify_mode(scan_l0, device_beam, love_profile, l_max=6)
        assert result.l_best == 0
        assert result.projections[0] > 0.99
        assert not result.spurious

    def test_l2(self, device_beam, love_profile):
        scan = make_synthetic_scan(device_beam, love_profile, 2,
                                   np.array([0.0]), waist_grid())
        result = classify_mode(scan, device_beam, love_profile, l_max=6)
        assert result.l_best == 2
        assert not result.spurious

    def test_projection_identity(self, device_beam, love_profile):
        # Exact basis fields project onto themselves only.
        for l in range(7):
            scan = make_synthetic_scan(device_beam, love_profile, l,
                                       np.array([0.0]), waist_grid(8e-6))
            result = classify_mode(scan, device_beam, love_profile, l_max=6)
            assert result.l_best == l
            off_diag = [p for m, p in enumerate(result.projections)
                        if m != l]
            assert max(off_diag) < 1e-6

    def test_multimode_flagged_spurious(self, device_beam, love_profile):
        # Seven orders carrying equal power: no single projection can
        # dominate, which is the broadband spurious signature.
        ys = waist_grid(8e-6)
        total = np.zeros((len(ys), 1), dtype=complex)
        for l in range(7):
            fmap = render_field(device_beam, love_profile, l,
                                np.array([0.0]), ys, normalize=False)
            power = np.trapezoid(np.abs(fmap.values[:, 0]) ** 2, ys)
            total += fmap.values / math.sqrt(power)
        img = ScanImage(np.array([0.0]), ys, np.abs(total),
                        wrap_phase(np.angle(total)))
        result = classify_mode(img, device_beam, love_profile, l_max=6)
        assert result.spurious
        assert result.dominance < 0.6

    def test_degenerate_image_rejected(self, device_beam, love_profile):
        img = ScanImage(np.array([0.0]), np.linspace(-2e-6, 2e-6, 9),
                        np.zeros((9, 1)), np.zeros((9, 1)))
        with pytest.raises(ClassificationError):
            classify_mode(img, device_beam, love_profile)

    def test_threshold_configurable(self, device_beam, love_profile):
        # An even two-mode mixture sits near dominance 0.5: flagged under
        # the default 0.6 threshold, accepted under a looser one.
        ys = waist_grid(8e-6)
        total = np.zeros((len(ys), 1), dtype=complex)
        for l in (0, 2):
            fmap = render_field(device_beam, love_profile, l,
                                np.array([0.0]), ys, normalize=False)
            power = np.trapezoid(np.abs(fmap.values[:, 0]) ** 2, ys)
            total += fmap.values / math.sqrt(power)
        img = ScanImage(np.array([0.0]), ys, np.abs(total),
                        wrap_phase(np.angle(total)))
        default = classify_mode(img, device_beam, love_profile, l_max=6)
        loose = classify_mode(img, device_beam, love_profile, l_max=6,
                              threshold=0.4)
        assert default.spurious
        assert not loose.spurious
