"""Exception hierarchy shared by the library and the command line."""


class PlanktonError(Exception):
    """Base class for every error raised by the package."""


class InvalidParametersError(PlanktonError, ValueError):
    """A precondition on parameters, states or options does not hold."""


class ConfigFileError(InvalidParametersError):
    """A run-configuration file has an unknown key or an unparsable value."""

    def __init__(self, path: str, line_number: int, line: str, reason: str):
        self.path = path
        self.line_number = line_number
        self.line = line
        super().__init__(f"{path}:{line_number}: {reason}: {line.strip()!r}")


class NumericalFailureError(PlanktonError, ArithmeticError):
    """No root bracket, divergent orbit, or eigenvalues outside the expected regime."""


class ExportError(PlanktonError):
    """Writing or reading an exported result failed."""
