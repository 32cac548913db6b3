"""Exception hierarchy. Everything derives from ``ValueError`` so callers that
only care about bad input can catch one thing."""


class TuranError(ValueError):
    pass


class InvalidSizesError(TuranError):
    pass


class PartViolationError(TuranError):
    pass


class DegeneratePartsError(TuranError):
    pass


class InvalidParameterError(TuranError):
    pass


class InfeasibleConstructionError(TuranError):
    pass


class CapExceededError(TuranError):
    pass


class GraphParseError(TuranError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResumeError(TuranError):
    pass
