"""
Tests for the utils.helpers module.
"""

import json

from utils.helpers import DEFAULT_SETTINGS, load_settings, sentence_words, write_output


def test_load_settings_missing_file(tmp_path, capsys):
    settings = load_settings(tmp_path / "settings.json")
    assert settings == DEFAULT_SETTINGS
    assert "not found, using defaults" in capsys.readouterr().out


def test_load_settings_invalid_json(tmp_path, capsys):
    path = tmp_path / "settings.json"
    path.write_text("{ not json")
    assert load_settings(path) == DEFAULT_SETTINGS
    assert "Warning: Could not load settings" in capsys.readouterr().out


def test_load_settings_merges_known_keys(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"mode": "Lstar", "jobs": 4, "colour": "never"}))
    settings = load_settings(path)
    assert settings["mode"] == "Lstar"
    assert settings["jobs"] == 4
    assert settings["budget_depth"] == DEFAULT_SETTINGS["budget_depth"]
    assert "colour" not in settings


def test_shipped_settings(data_dir):
    settings = load_settings(data_dir.parent / "configs" / "settings.json")
    assert settings == DEFAULT_SETTINGS


def test_write_output_creates_directories(tmp_path):
    path = write_output(tmp_path / "out" / "nested", "proof.drv", "Ax :: a -> a\n")
    assert path == tmp_path / "out" / "nested" / "proof.drv"
    assert path.read_text() == "Ax :: a -> a\n"


def test_sentence_words():
    assert sentence_words(["the young", "lady"]) == ["the", "young", "lady"]
    assert sentence_words(["  Harold  "]) == ["Harold"]
