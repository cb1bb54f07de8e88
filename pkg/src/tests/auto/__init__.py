"""Package with auto tests."""
