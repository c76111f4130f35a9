"""Entity factories."""
