"""Reachability analysis and occupancy extraction."""
