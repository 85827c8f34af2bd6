"""Tests for artifacts module."""

import pytest

from sacmt.artifacts import atomic_write_text, dump_json, read_json, require_object, write_json
from sacmt.errors import ArtifactError


class TestAtomicWriteText:
    """Tests for atomic_write_text function."""

    def test_creates_parents(self, tmp_path):
        """Test that missing directories are created."""
        path = tmp_path / "a" / "b" / "out.txt"
        atomic_write_text(path, "kya baat\n")

        assert path.read_text(encoding="utf-8") == "kya baat\n"

    def test_overwrites(self, tmp_path):
        """Test that an existing file is replaced."""
        path = tmp_path / "out.txt"
        path.write_text("old", encoding="utf-8")
        atomic_write_text(path, "new")

        assert path.read_text(encoding="utf-8") == "new"

    def test_no_temp_files_left(self, tmp_path):
        """Test that only the target remains."""
        atomic_write_text(tmp_path / "out.txt", "x")
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]


class TestJson:
    """Tests for JSON artifacts."""

    def test_dump_layout(self):
        """Test sorted keys, indentation and trailing newline."""
        assert dump_json({"b": 1, "a": "😄"}) == '{\n  "a": "😄",\n  "b": 1\n}\n'

    def test_roundtrip(self, tmp_path):
        """Test write then read."""
        path = tmp_path / "m.json"
        write_json(path, {"w": [0.1, 2.5e-300]})

        assert read_json(path) == {"w": [0.1, 2.5e-300]}

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            read_json(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        """Test that garbage is an artifact error."""
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")

        with pytest.raises(ArtifactError, match="Could not parse"):
            read_json(path)

    def test_require_object(self, tmp_path):
        """Test that a JSON list is not accepted where an object is expected."""
        with pytest.raises(ArtifactError):
            require_object([1, 2], tmp_path / "x.json")
        assert require_object({"a": 1}, tmp_path / "x.json") == {"a": 1}
