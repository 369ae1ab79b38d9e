"""Runtime configuration for the double-descent toolkit."""
