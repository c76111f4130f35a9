"""Classification enums."""
from enum import Enum


class ContainmentClass(Enum):
    """Where the next observed control action fell relative to the current set."""
    INSIDE = "inside"
    OUTSIDE_A = "outside_a"
    OUTSIDE_KAPPA = "outside_kappa"
    OUTSIDE_BOTH = "outside_both"
