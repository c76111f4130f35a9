"""Closed-loop grid-scenario experiment."""
