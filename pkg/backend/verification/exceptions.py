"""
Exception hierarchy for the verification workbench.

Failed checks are reported as data (fail entries with residuals); the
exceptions below signal inputs the workbench cannot evaluate at all.
"""


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench."""
    pass


class GradingError(WorkbenchError):
    """Raised when a ghost number, parity or pair declaration is inconsistent."""
    pass


class StructureError(WorkbenchError):
    """Raised when objects built over different variable tables or structures are mixed."""
    pass


class DegenerateDegreeError(WorkbenchError):
    """Raised when an Euler-field construction is requested for k = -1."""
    pass


class UnsupportedModelError(WorkbenchError):
    """Raised when boundary reduction is asked of a model outside the linear class."""
    pass


class ModelParseError(WorkbenchError):
    """Raised on a syntax or grading error in a model file."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        location = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{location}{message}")
