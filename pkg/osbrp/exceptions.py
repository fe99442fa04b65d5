"""
Error taxonomy
Every failure raised by the solver library derives from OsbrpError
"""

from typing import Any, Dict, List, Optional


class OsbrpError(Exception):
    """Base class for all solver errors"""


class InstanceValidationError(OsbrpError, ValueError):
    """
    An instance (or generator config) violates an invariant.

    `field` is the path of the first failing field (e.g. ``visits[1].epoch``),
    `checks` holds every check record produced while validating.
    """

    def __init__(self, field: str, message: str, checks: Optional[List[Dict[str, Any]]] = None):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
        self.checks = checks or []


class InstanceParseError(OsbrpError, ValueError):
    """The instance document is not well-formed"""


class FeasibilityError(OsbrpError, ValueError):
    """An intervention lies outside its visit's load/capacity window"""

    def __init__(self, visit_index: int, value: int, lower: int, upper: int):
        super().__init__(
            f"intervention for visit {visit_index} is {value}, "
            f"feasible range is [{lower}, {upper}]"
        )
        self.visit_index = visit_index
        self.value = value
        self.lower = lower
        self.upper = upper


class InputError(OsbrpError, ValueError):
    """Malformed call arguments (length mismatch, unparsable lists)"""


class EpochRangeError(OsbrpError, IndexError):
    """Epoch bounds outside the horizon or reversed"""


class ContractError(OsbrpError, RuntimeError):
    """A caller broke an operation's precondition"""


class InvariantViolation(OsbrpError, RuntimeError):
    """A computed result fails its own post-conditions"""


class SearchSpaceTooLarge(OsbrpError, RuntimeError):
    """The oracle refuses to enumerate a box above its limit"""

    def __init__(self, size: int, limit: int):
        super().__init__(f"search space of {size:,} vectors exceeds the limit of {limit:,}")
        self.size = size
        self.limit = limit


class ConfigError(OsbrpError, ValueError):
    """Bad rules file or bad command configuration"""
