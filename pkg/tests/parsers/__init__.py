"""Tests for parsers."""
