import pytest

from src.config.configuration import OUTPUT_DIR_ENV, Configuration, get_configuration, set_configuration


@pytest.fixture(autouse=True)
def configuration(tmp_path, monkeypatch):
    """An isolated runtime configuration whose caches live under ``tmp_path``."""
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    previous = get_configuration()
    config = Configuration(
        cache_dir=str(tmp_path / "cache"),
        output_dir=str(tmp_path / "out"),
        log_level="WARNING",
    )
    set_configuration(config)
    yield config
    set_configuration(previous)
