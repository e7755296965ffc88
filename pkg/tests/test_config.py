import json
import shutil

import pytest

from sawfocus.config import ConfigError, load_device_config

from conftest import DATA_DIR


@pytest.fixture()
def config_dict(device_config_path):
    return json.loads(device_config_path.read_text())


@pytest.fixture()
def write_config(tmp_path):
    """Write a config dict (plus the material CSV) into tmp and return its path."""
    shutil.copy(DATA_DIR / "love_profile.csv", tmp_path / "love_profile.csv")

    def _write(doc):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc))
        return path

    return _write


class TestShippedConfig:
    def test_loads(self, device_config_path):
        cfg = load_device_config(device_config_path)
        assert cfg.wavelength_m == 2e-6
        assert cfg.waist_m == 2e-6
        assert cfg.effective_length_m == 33.6e-6
        assert cfg.idt_pairs == 5 and cfg.mirror_fingers == 200

    def test_mirror_calibrated_from_lengths(self, device_config_path):
        cfg = load_device_config(device_config_path)
        # d = gap + 2 L_p with L_p = pitch / (4 r_s).
        lp = cfg.pitch_m / (4.0 * cfg.mirror_reflectivity)
        assert cfg.mirror_physical_gap_m + 2.0 * lp == pytest.approx(
            cfg.effective_length_m, rel=1e-12)

    def test_frequency_grid(self, device_config_path):
        cfg = load_device_config(device_config_path)
        grid = cfg.frequency_grid()
        assert len(grid) == 17001
        assert grid[0] == 2.05e9 and grid[-1] == pytest.approx(2.90e9)

    def test_derived_objects(self, device_config_path):
        cfg = load_device_config(device_config_path)
        assert cfg.beam().waist == cfg.waist_m
        assert cfg.resonator_spec().aperture_rule == "full_2w"
        assert cfg.resonator_spec("apodized_const_w0").aperture_rule == (
            "apodized_const_w0")
        assert cfg.phase_velocity() == pytest.approx(4300.0, rel=1e-9)


class TestValidation:
    def test_unknown_key_rejected(self, config_dict, write_config):
        config_dict["waste_m"] = 1e-6
        with pytest.raises(ConfigError, match="waste_m"):
            load_device_config(write_config(config_dict))

    def test_missing_key_rejected(self, config_dict, write_config):
        del config_dict["wavelength_m"]
        with pytest.raises(ConfigError, match="wavelength_m"):
            load_device_config(write_config(config_dict))

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_device_config(path)

    def test_missing_material_file(self, config_dict, write_config):
        config_dict["material_csv"] = "absent.csv"
        with pytest.raises(ConfigError, match="absent.csv"):
            load_device_config(write_config(config_dict))

    def test_material_path_relative_to_config(self, config_dict,
                                              write_config):
        cfg = load_device_config(write_config(config_dict))
        assert cfg.material_csv.endswith("love_profile.csv")
        cfg.profile()  # resolvable from the config's own directory

    def test_bad_boundary(self, config_dict, write_config):
        config_dict["boundary"] = "open"
        with pytest.raises(ConfigError, match="boundary"):
            load_device_config(write_config(config_dict))

    def test_pitch_wavelength_consistency(self, config_dict, write_config):
        config_dict["pitch_m"] = 0.9e-6
        with pytest.raises(ConfigError, match="pitch"):
            load_device_config(write_config(config_dict))

    def test_positive_dimensions(self, config_dict, write_config):
        config_dict["waist_m"] = -2e-6
        with pytest.raises(ConfigError):
            load_device_config(write_config(config_dict))

    def test_mode_index_validation(self, config_dict, write_config):
        config_dict["longitudinal_indices"] = [0]
        with pytest.raises(ConfigError):
            load_device_config(write_config(config_dict))
        config_dict["longitudinal_indices"] = [33]
        config_dict["transverse_indices"] = [-2]
        with pytest.raises(ConfigError):
            load_device_config(write_config(config_dict))


class TestCavityLengthResolution:
    def test_gap_plus_reflectivity_derives_length(self, config_dict,
                                                  write_config):
        config_dict["effective_length_m"] = None
        config_dict["mirror_reflectivity"] = 0.10869565217391312
        cfg = load_device_config(write_config(config_dict))
        assert cfg.effective_length_m == pytest.approx(33.6e-6, rel=1e-9)

    def test_overdetermined_rejected(self, config_dict, write_config):
        config_dict["mirror_reflectivity"] = 0.1
        with pytest.raises(ConfigError, match="at most two"):
            load_device_config(write_config(config_dict))

    def test_underdetermined_rejected(self, config_dict, write_config):
        config_dict["effective_length_m"] = None
        config_dict["mirror_reflectivity"] = None
        with pytest.raises(ConfigError):
            load_device_config(write_config(config_dict))
