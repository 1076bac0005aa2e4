"""Core household model: units, formatting, errors, schedules and costs."""
