"""Canonical JSON serialization shared by the API, the CLI, and persisted documents.

Every machine-facing JSON surface goes through ``canonical_json`` so that
semantically equal documents are byte-identical (sorted keys, compact
separators, raw UTF-8).
"""

import json
from typing import Any


def canonical_json(obj: Any) -> str:
    """Serialize to the canonical compact form used on every wire surface."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def canonical_json_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")
