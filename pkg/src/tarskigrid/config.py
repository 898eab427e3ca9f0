"""Global toggle for debug invariant assertions.

Debug checks re-verify certificates and loop invariants with extra oracle
evaluations. Those evaluations go through ``peek`` and are tallied under the
"debug" label, never against an algorithm's query budget. The environment
variable ``TARSKI_DEBUG_CHECKS`` (``0`` or ``1``) sets the default; the
benchmark runner turns checks off locally so measurements stay undistorted.
"""

import os
from contextlib import contextmanager

_override: list[bool] = []


def debug_checks_enabled() -> bool:
    if _override:
        return _override[-1]
    return os.environ.get("TARSKI_DEBUG_CHECKS", "1") != "0"


@contextmanager
def debug_checks(enabled: bool):
    """Temporarily force debug checks on or off."""
    _override.append(bool(enabled))
    try:
        yield
    finally:
        _override.pop()
