from typing import Any, Dict, Optional


class KpnError(Exception):
    """Base exception for scheme, oracle and bound failures."""

    code = "error"
    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class InvalidParameter(KpnError, ValueError):
    """A parameter is outside the operation's domain."""

    code = "InvalidParameter"
    exit_code = 2


class DegenerateInterpolation(KpnError, ValueError):
    """Interpolation points do not determine a unique polynomial."""

    code = "DegenerateInterpolation"


class NotQualified(KpnError):
    """A coalition outside the access structure asked for the secret."""

    code = "NotQualified"


class EnumerationTooLarge(KpnError):
    """The exhaustive outcome space exceeds the configured budget."""

    code = "EnumerationTooLarge"

    def __init__(self, size: int, budget: int):
        super().__init__(
            f"Enumeration of {size} outcomes exceeds budget {budget}",
            {"size": size, "budget": budget},
        )
        self.size = size
        self.budget = budget


class ProblemTooLarge(KpnError):
    """The linear program would exceed the configured element cap."""

    code = "ProblemTooLarge"


class LpStatusError(KpnError):
    """The simplex solver ended without an optimum."""

    code = "LpStatusError"

    def __init__(self, status: str, message: Optional[str] = None):
        super().__init__(message or f"Linear program is {status}", {"status": status})
        self.status = status
