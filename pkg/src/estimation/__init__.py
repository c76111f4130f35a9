"""Estimation of the surrounding vehicle's control actions and Control-Input set."""
