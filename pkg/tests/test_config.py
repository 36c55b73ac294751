import pytest

from actin_automaton.config import load_settings
from actin_automaton.errors import ConfigError

KEYS = ["THREADS", "LOG_LEVEL", "BOND_TOLERANCE", "BOND_MODE", "MAX_STEPS_FACTOR", "HISTORY_CAP_MB", "SERIES_LIMIT"]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in KEYS:
        monkeypatch.setenv(f"ACTIN_{key}", "")


def test_defaults():
    settings = load_settings()
    assert settings.threads >= 1
    assert settings.log_level == "WARNING"
    assert settings.bond_mode == "records-then-infer"
    assert settings.bond_tolerance == 0.45
    assert settings.series_limit is None
    assert settings.max_steps_for(10) == 1000


def test_environment_overrides_defaults(monkeypatch):
    monkeypatch.setenv("ACTIN_THREADS", "3")
    monkeypatch.setenv("ACTIN_MAX_STEPS_FACTOR", "7")
    settings = load_settings()
    assert settings.threads == 3
    assert settings.max_steps_for(10) == 70


def test_config_file_then_cli(tmp_path, monkeypatch):
    monkeypatch.setenv("ACTIN_THREADS", "3")
    path = tmp_path / "actin.env"
    path.write_text("ACTIN_THREADS=5\nACTIN_LOG_LEVEL=DEBUG\n")

    from_file = load_settings(path)
    assert from_file.threads == 5
    assert from_file.log_level == "DEBUG"
    assert load_settings(path, threads=2).threads == 2


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "absent.env")


@pytest.mark.parametrize(
    "key, value",
    [("BOND_MODE", "guess"), ("THREADS", "0"), ("LOG_LEVEL", "LOUD"), ("HISTORY_CAP_MB", "-1")],
)
def test_invalid_values(monkeypatch, key, value):
    monkeypatch.setenv(f"ACTIN_{key}", value)
    with pytest.raises(ConfigError):
        load_settings()
