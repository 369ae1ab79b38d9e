"""Figure presets and the Monte-Carlo sweep engine."""
