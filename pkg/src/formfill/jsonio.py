"""Shared JSON emission so CLI output and HTTP bodies are byte-identical."""

from __future__ import annotations

import json


def to_json_bytes(obj: object) -> bytes:
    """Stable UTF-8 JSON: two-space indent, trailing newline, no NaN/Infinity."""
    return (json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n").encode(
        "utf-8"
    )
