"""Exception hierarchy shared by the library and the CLI exit codes."""


class BalancedCoversError(Exception):
    """Base class for every error raised by this package."""


class InputError(BalancedCoversError, ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class MismatchError(InputError):
    """Two configurations cannot be compared index by index."""


class BoundaryContactError(InputError):
    """A balanced region reaches the boundary of the analysis window."""


class CapacityError(BalancedCoversError):
    """Instance exceeds the configured desk-scale limits (exit code 3)."""


class GenericityError(BalancedCoversError):
    """No generic ray direction was found within the retry budget (exit code 3)."""


class OracleError(BalancedCoversError):
    """An independent oracle was asked about an instance outside its domain."""


class TheoremViolationError(BalancedCoversError):
    """A guaranteed witness was not found; always indicates a bug (exit code 4)."""
