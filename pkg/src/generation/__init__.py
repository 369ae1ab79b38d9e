"""Seeded generation of sparse Gaussian regression instances."""
