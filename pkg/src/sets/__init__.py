"""Interval and zonotope set algebra."""
