"""Shipped JSON schemas for the CLI's machine-readable outputs."""

from __future__ import annotations

import json
from importlib import resources
from typing import Dict

NAMES = ("structure", "classification", "bound", "sat", "spectrum",
         "check", "ebs", "equiv")


def load(name: str) -> Dict:
    if name not in NAMES:
        raise KeyError(f"unknown schema {name!r}")
    text = resources.files(__package__).joinpath(f"{name}.json").read_text("utf-8")
    return json.loads(text)


def load_all() -> Dict[str, Dict]:
    return {name: load(name) for name in NAMES}
