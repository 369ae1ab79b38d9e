"""Invariant monitoring: the deterministic selftest suite."""
