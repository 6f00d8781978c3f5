"""
Helper functions for configuration and file output.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Union

DEFAULT_SETTINGS: Dict[str, Any] = {
    "mode": "L1",
    "budget_depth": 40,
    "budget_contr": 3,
    "budget_nodes": 1_000_000,
    "max_size": 6,
    "jobs": 1,
}


def load_settings(filepath: Union[str, Path]) -> Dict[str, Any]:
    """
    Read default options from the settings file.

    Unknown keys are ignored; missing keys keep their built-in default.

    Args:
        filepath (Union[str, Path]): Path to the JSON settings file.

    Returns:
        Dict[str, Any]: Settings with every known key present.
    """
    settings = dict(DEFAULT_SETTINGS)
    try:
        with open(filepath, "r", encoding="utf-8") as file:
            loaded: Dict[str, Any] = json.load(file)
    except FileNotFoundError:
        print(f"Warning: settings file {filepath} not found, using defaults.")
        return settings
    except (OSError, json.JSONDecodeError) as e:
        print(f"Warning: Could not load settings: {e}")
        return settings
    for key in DEFAULT_SETTINGS:
        if key in loaded:
            settings[key] = loaded[key]
    return settings


def write_output(directory: Union[str, Path], filename: str, text: str) -> Path:
    """
    Write a report file, creating the directory when needed.

    Returns:
        Path: The written file.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / filename
    path.write_text(text, encoding="utf-8")
    return path


def sentence_words(parts: List[str]) -> List[str]:
    """Split command-line sentence arguments into words, quoted or not."""
    return [word for part in parts for word in part.split()]
