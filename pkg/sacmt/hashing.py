"""Hashing utilities for model payload checksums and fingerprints."""

import hashlib
import json
from typing import Any


def canonical_json(payload: Any) -> str:
    """
    Serialize a payload the same way every time.

    Keys are sorted and separators fixed; floats use Python's shortest
    round-trip repr, so equal payloads always give equal text.

    Examples:
        >>> canonical_json({"b": 1, "a": [0.5]})
        '{"a":[0.5],"b":1}'
    """
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def compute_payload_hash(payload: Any) -> str:
    """
    Compute a SHA1 checksum of a JSON-serializable payload.

    Args:
        payload: Parameter arrays, vocab or any other JSON value

    Returns:
        40-character hexadecimal SHA1 hash

    Examples:
        >>> h1 = compute_payload_hash({"w": [1.0, 2.0]})
        >>> h2 = compute_payload_hash({"w": [1.0, 2.0]})
        >>> h1 == h2
        True
        >>> len(h1)
        40
    """
    return hashlib.sha1(canonical_json(payload).encode("utf-8")).hexdigest()


def short_hash(full_hash: str, length: int = 12) -> str:
    """
    Get a shortened version of a hash for display in summaries.

    Examples:
        >>> short_hash("abcdef1234567890abcdef1234567890abcdef12", length=12)
        'abcdef123456'
    """
    return full_hash[:length]
