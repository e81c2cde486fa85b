"""Protocol-independent speed bound.

Whatever sweep pattern the defenders use, holding a disk of radius R0
against invaders of speed VT with n sensors of half-length r requires at
least pi * R0 * VT / (n * r). Every protocol critical speed in this
library sits at or above this value.
"""

import math

from .scenario import ScenarioParams


def universal_lower_bound(params: ScenarioParams) -> float:
    """V_LB = pi * R0 * VT / (n * r); linear in R0 and VT, inverse in n and r."""
    return math.pi * params.R0 * params.VT / (params.n * params.r)
