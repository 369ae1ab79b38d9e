"""CSV and SVG output for sweep tables."""
