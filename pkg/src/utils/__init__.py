"""Utility helpers re-exported for convenience.

Errors, settings and the parallel map used by the enumeration kernels.
"""

from .errors import CohomologyError
from .parallel import parallel_map
from .settings import Budget, Settings, current_settings, use_settings

__all__ = [
    "Budget",
    "CohomologyError",
    "Settings",
    "current_settings",
    "parallel_map",
    "use_settings",
]
