"""Atomic artifact writes and versioned JSON files."""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict

from .errors import ArtifactError


def atomic_write_text(path: Path, text: str) -> None:
    """
    Write text to ``path`` atomically.

    The content goes to a temp file in the same directory, which is then
    renamed over the target (atomic on POSIX). On failure the target is
    left untouched and the temp file removed.

    Args:
        path: Destination file
        text: Full file content

    Raises:
        IOError: If the file cannot be written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException as e:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        if isinstance(e, OSError):
            raise IOError(f"Failed to write {path}: {e}") from e
        raise


def dump_json(payload: Any) -> str:
    """Render a JSON artifact: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(path: Path, payload: Any) -> None:
    """Atomically write a JSON artifact."""
    atomic_write_text(path, dump_json(payload))


def read_json(path: Path) -> Any:
    """
    Read a JSON artifact.

    Raises:
        FileNotFoundError: If the file doesn't exist
        ArtifactError: If the content is not valid JSON
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ArtifactError(f"Could not parse {path}: {e}") from e


def require_object(payload: Any, path: Path) -> Dict[str, Any]:
    """Ensure a parsed artifact is a JSON object."""
    if not isinstance(payload, dict):
        raise ArtifactError(f"Expected a JSON object in {path}")
    return payload
