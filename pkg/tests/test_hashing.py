"""Tests for hashing module."""

import pytest

from sacmt.hashing import canonical_json, compute_payload_hash, short_hash


class TestCanonicalJson:
    """Tests for canonical_json function."""

    def test_sorted_compact(self):
        """Test that keys are sorted and separators compact."""
        assert canonical_json({"b": 1, "a": [0.5]}) == '{"a":[0.5],"b":1}'

    def test_key_order_irrelevant(self):
        """Test that insertion order does not matter."""
        assert canonical_json({"x": 1, "y": 2}) == canonical_json({"y": 2, "x": 1})

    def test_float_repr_exact(self):
        """Test that floats keep their shortest round-trip repr."""
        assert canonical_json([0.1, 1e-17]) == "[0.1,1e-17]"

    def test_nan_rejected(self):
        """Test that NaN cannot be serialized."""
        with pytest.raises(ValueError):
            canonical_json([float("nan")])


class TestComputePayloadHash:
    """Tests for compute_payload_hash function."""

    def test_hash_consistency(self):
        """Test that same payload produces same hash."""
        hash1 = compute_payload_hash({"w": [1.0, 2.0]})
        hash2 = compute_payload_hash({"w": [1.0, 2.0]})

        assert hash1 == hash2

    def test_hash_length(self):
        """Test that hash is 40 characters (SHA1)."""
        assert len(compute_payload_hash({"w": []})) == 40

    def test_hash_different_values(self):
        """Test that a changed parameter changes the hash."""
        hash1 = compute_payload_hash({"w": [1.0, 2.0]})
        hash2 = compute_payload_hash({"w": [1.0, 2.0000000000000004]})

        assert hash1 != hash2

    def test_hash_different_names(self):
        """Test that renaming an array changes the hash."""
        assert compute_payload_hash({"a": [1.0]}) != compute_payload_hash({"b": [1.0]})


class TestShortHash:
    """Tests for short_hash function."""

    def test_default_length(self):
        """Test default short hash length."""
        full_hash = "abcdef1234567890"
        short = short_hash(full_hash)

        assert len(short) == 12
        assert short == "abcdef123456"

    def test_custom_length(self):
        """Test custom short hash length."""
        assert short_hash("abcdef1234567890", length=6) == "abcdef"
