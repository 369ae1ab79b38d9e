"""Tests for the double-descent toolkit."""
