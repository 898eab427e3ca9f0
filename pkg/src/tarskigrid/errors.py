"""Exception types shared across the package."""


class UsageError(ValueError):
    """A caller violated a precondition (bad dimensions, out-of-box query, ...)."""


class InstanceInvalidError(RuntimeError):
    """The input oracle violated a monotonicity/range guarantee mid-run."""


class SolverContractError(RuntimeError):
    """A solver broke an internal protocol (e.g. returned a point it never queried)."""


class LoadError(ValueError):
    """An instance document is malformed or fails validation at load time."""
