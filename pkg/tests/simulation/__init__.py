"""Tests for simulation."""
