"""Set-based occupancy prediction for surrounding vehicles."""
