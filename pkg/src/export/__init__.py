"""Record files and JSON schemas."""
