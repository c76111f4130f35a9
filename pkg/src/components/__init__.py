"""ECS components attached to tracked vehicles."""
