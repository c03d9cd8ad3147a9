"""Tests for core entities."""
