"""Tests for sacmt."""
