"""Package with all source code."""
