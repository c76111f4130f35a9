"""Single-track kinematic vehicle model."""
