"""Data structures and error types."""
