"""Incoherence, bound formulas and per-instance bound ledgers."""
