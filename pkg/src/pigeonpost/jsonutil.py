"""Canonical JSON serialization shared by all emitters (golden-file safe)."""

from __future__ import annotations

import json


def canonical_dumps(obj) -> str:
    """Serialize with sorted keys and fixed separators; trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
