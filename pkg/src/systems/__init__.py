"""ECS processors, one per pipeline stage."""
