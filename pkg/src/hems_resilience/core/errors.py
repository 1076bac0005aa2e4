"""Exception hierarchy shared by every hems_resilience module."""


class HemsError(Exception):
    """Base exception for scheduling, attack and resilience errors."""
    pass


class InvalidInputError(HemsError, ValueError):
    """Raised when a value breaks a type invariant at construction time."""
    pass


class InvalidParameterError(InvalidInputError):
    """Raised when optimizer or experiment parameters are out of range."""
    pass


class ConfigError(InvalidInputError):
    """Raised when an experiment configuration cannot be used."""
    pass


class ScenarioFileError(InvalidInputError):
    """
    Raised when a scenario or tariff file fails to parse or validate.

    The message is anchored to the offending line as ``path:line: reason``.
    """

    def __init__(self, path, line: int | None, reason: str):
        self.path = str(path)
        self.line = line
        self.reason = reason
        location = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{location}: {reason}")


class InfeasibleSchedule(HemsError):
    """Raised when a schedule is priced or used while violating its scenario."""

    def __init__(self, violations, location: str | None = None):
        self.violations = list(violations)
        self.location = location
        details = "; ".join(v.message for v in self.violations)
        prefix = f"{location}: " if location else ""
        super().__init__(f"{prefix}Schedule is infeasible ({len(self.violations)} violations): {details}")


class EncodingMismatch(HemsError, ValueError):
    """Raised when a candidate does not match its scenario's decision variables."""
    pass


class SearchSpaceTooLarge(HemsError):
    """Raised when exhaustive search would exceed its evaluation limit."""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"Search space has {size} candidates, limit is {limit}")


class InvalidAttack(HemsError, ValueError):
    """Raised when an attack spec is malformed or would forge a non-positive price."""

    def __init__(self, reason: str, index: int | None = None):
        self.reason = reason
        self.index = index
        prefix = f"attack #{index}: " if index is not None else ""
        super().__init__(f"{prefix}{reason}")


class UndefinedRI(HemsError, ZeroDivisionError):
    """Raised when the resilience index is requested for a zero clean cost."""
    pass
