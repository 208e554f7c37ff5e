class CubicTSPError(Exception):
    """Base class for every error raised by the solver workbench."""


class GraphFormatError(CubicTSPError, ValueError):
    def __init__(self, message: str, line_number: int = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GeneratorError(CubicTSPError, ValueError):
    pass


class OracleRefusedError(CubicTSPError, ValueError):
    pass


class InvariantViolationError(CubicTSPError, RuntimeError):
    """
    Raised when a traced run breaks a path invariant.
    Carries the report built so far so the CLI can dump it next to the trace.
    """

    def __init__(self, message: str, report: dict = None):
        self.report = report or {}
        super().__init__(message)


class InternalSolverError(CubicTSPError, RuntimeError):
    pass
