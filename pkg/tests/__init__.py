"""Tests for afesens library."""
