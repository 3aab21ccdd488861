#!/usr/bin/env python3
"""
Tests for settings persistence, validation and the job-count override.
"""

import json

import pytest

from src.config.settings import LabSettings, SettingsManager, default_jobs


@pytest.fixture
def manager(tmp_path):
    return SettingsManager(tmp_path / "config")


def test_defaults_without_file(manager):
    assert manager.settings == LabSettings()
    assert manager.settings.p1_grid == [0.0, 1e-4, 1e-3, 1e-2]
    assert manager.settings.adapt_grad_threshold == 1e-2


def test_save_and_reload(manager):
    assert manager.set_setting("adapt_max_depth", 7)
    reloaded = SettingsManager(manager.settings_dir)
    assert reloaded.settings.adapt_max_depth == 7


def test_backup_written_before_save(manager):
    manager.set_setting("jobs", 2)
    manager.set_setting("jobs", 3)
    backup = json.loads(manager.backup_file.read_text())
    assert backup["jobs"] == 2


def test_corrupt_file_falls_back_to_backup(manager):
    manager.set_setting("jobs", 2)
    manager.set_setting("jobs", 4)
    manager.settings_file.write_text("{ not json")
    assert SettingsManager(manager.settings_dir).settings.jobs == 2


def test_unknown_key_is_rejected(manager):
    assert not manager.set_setting("plot_theme", "x")


def test_validation_repairs_bad_values(tmp_path, manager):
    path = tmp_path / "odd.json"
    path.write_text(json.dumps({
        "p1_grid": [0.0, 0.5, 1e-3],
        "cobyla_max_iterations": 0,
        "fd_step": -1.0,
        "adapt_gradient_norm": "l1",
        "log_level": "LOUD",
        "unknown_key": 1,
    }))
    settings = manager.read_settings_file(path)
    assert settings.p1_grid == [0.0, 1e-3]
    assert settings.cobyla_max_iterations == 1000
    assert settings.fd_step == 1e-4
    assert settings.adapt_gradient_norm == "l2"
    assert settings.log_level == "INFO"


def test_export_and_import(tmp_path, manager):
    manager.set_setting("rc_randomizations", 4)
    exported = tmp_path / "exported.json"
    assert manager.export_settings(str(exported))

    other = SettingsManager(tmp_path / "other")
    assert other.import_settings(str(exported))
    assert other.settings.rc_randomizations == 4
    assert not other.import_settings(str(tmp_path / "missing.json"))


def test_reset_to_defaults(manager):
    manager.set_setting("jobs", 8)
    assert manager.reset_to_defaults()
    assert manager.settings.jobs == 1


def test_default_jobs_env_override(monkeypatch):
    monkeypatch.setenv("NOISYLAB_JOBS", "6")
    assert default_jobs(LabSettings()) == 6
    monkeypatch.setenv("NOISYLAB_JOBS", "many")
    assert default_jobs(LabSettings(jobs=3)) == 3
    monkeypatch.delenv("NOISYLAB_JOBS")
    assert default_jobs(LabSettings(jobs=2)) == 2


def test_summary(manager):
    summary = manager.get_settings_summary()
    assert summary["settings_file"].endswith("settings.json")
    assert summary["two_qubit_ratio"] == 10.0


def test_set_setting_rejects_unusable_values(manager):
    assert not manager.set_setting("jobs", "many")
    assert manager.settings.jobs == 1
    assert not manager.settings_file.exists()


def test_dense_qubit_limit_is_capped(manager):
    assert manager.set_setting("dense_qubit_limit", 12)
    assert manager.settings.dense_qubit_limit == 10
    assert manager.set_setting("dense_qubit_limit", 4)
    assert manager.settings.dense_qubit_limit == 4
