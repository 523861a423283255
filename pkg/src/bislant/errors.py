"""Exception hierarchy shared by all modules."""


class BislantError(Exception):
    """Base class for every error raised by this package."""


class NotPositiveDefinite(BislantError):
    pass


class RankDeficient(BislantError):
    pass


class DomainError(BislantError):
    """Evaluation outside the domain of an elementary function or chart."""


class ParseError(BislantError):
    """Malformed DSL source. Carries 1-based line and column."""

    def __init__(self, message, line=1, column=1, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownIdentifier(ParseError):
    pass


class ArityError(ParseError):
    pass


class AlmostProductViolation(BislantError):
    pass


class MetallicViolation(BislantError):
    pass


class DegenerateVector(BislantError):
    pass


class SpanDefect(BislantError):
    pass


class MetricMismatch(BislantError):
    pass


class RoleViolation(BislantError):
    pass


class HypothesisNotMet(BislantError):
    pass


class ConfigError(BislantError):
    pass
