import json

import pytest

from src.config.configuration import OUTPUT_DIR_ENV, Configuration
from src.config.loader import load_config_file, load_yaml_config, normalize_key
from src.exceptions import ConfigError
from src.montecarlo.config import ExperimentConfig


def test_normalize_key_accepts_flag_and_env_spellings():
    assert normalize_key("--max-vertices") == "max_vertices"
    assert normalize_key("MAX_VERTICES") == "max_vertices"
    assert normalize_key("bin-width") == "bin_width"


def test_from_mapping_coerces_strings():
    config = Configuration.from_mapping({"max_vertices": "4096", "root_tolerance": "1e-12", "nu_radii": "4,8"})
    assert config.max_vertices == 4096
    assert config.root_tolerance == 1e-12
    assert config.nu_radii == [4, 8]


def test_from_mapping_ignores_unknown_keys():
    config = Configuration.from_mapping({"not_a_knob": 3})
    assert config == Configuration()


def test_from_mapping_rejects_bad_types():
    with pytest.raises(ConfigError):
        Configuration.from_mapping({"workers": "many"})


def test_output_dir_env_override(monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, "/tmp/elsewhere")
    assert Configuration.from_mapping({"output_dir": "results"}).output_dir == "/tmp/elsewhere"


def test_yaml_loader_normalizes_and_caches(tmp_path):
    path = tmp_path / "conf.yaml"
    path.write_text("MAX_VERTICES: 1024\nCACHE_DIR: somewhere\n", encoding="utf-8")
    first = load_yaml_config(str(path))
    assert first == {"max_vertices": 1024, "cache_dir": "somewhere"}
    assert load_yaml_config(str(path)) is first


def test_yaml_loader_missing_file_is_empty(tmp_path):
    assert load_yaml_config(str(tmp_path / "absent.yaml")) == {}


def test_flat_and_json_experiment_files_agree(tmp_path):
    flat = tmp_path / "run.conf"
    flat.write_text("# comment\nN=8\nD=3\nELL=2\nU=1.0\nREPS=500\nSEED=42\n", encoding="utf-8")
    structured = tmp_path / "run.json"
    structured.write_text(json.dumps({"n": 8, "d": 3, "ell": 2, "u": 1.0, "reps": 500, "seed": 42}), encoding="utf-8")

    from_flat = ExperimentConfig.from_sources(flat)
    from_json = ExperimentConfig.from_sources(structured)
    assert from_flat == from_json
    assert load_config_file(flat)["n"] == "8"


def test_flags_override_file_keys(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("N=8\nD=3\nU=1.0\nREPS=500\n", encoding="utf-8")
    cfg = ExperimentConfig.from_sources(path, {"reps": 100, "t": 7})
    assert cfg.reps == 100
    assert cfg.t == 7 and cfg.u is None


def test_missing_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_sources(tmp_path / "nope.conf")


def test_invalid_experiment_is_a_config_error():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_sources(None, {"n": 8, "d": 3, "t": 5, "u": 1.0})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_sources(None, {"n": 8, "d": 3, "t": 5, "reps": 1})


def test_time_and_density_from_the_same_source_conflict(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("N=8\nD=3\nT=5\nU=1.0\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_sources(path)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_sources(path, {"t": 3, "u": 0.5})


def test_density_flag_displaces_file_time(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("N=8\nD=3\nT=5\n", encoding="utf-8")
    cfg = ExperimentConfig.from_sources(path, {"u": 1.0})
    assert cfg.t is None and cfg.steps == 511
