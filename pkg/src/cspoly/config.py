"""Runtime limits shared by the enumerating operations."""

import os

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "CSPOLY_BUDGET"


def budget(override=None) -> int:
    """Explicit override, else the CSPOLY_BUDGET environment variable, else the default."""
    if override is not None:
        return int(override)
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET
