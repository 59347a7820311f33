"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """A discretization is too coarse or a window too small for the requested run.

    Raised when an enlarged-window consistency check moves the Schmidt
    spectrum by more than the allowed drift, or when the oscillatory
    phase-matching factor is under-resolved by the grid.
    """


class MatrixParseError(ValueError):
    """A matrix file could not be parsed.

    Parameters
    ----------
    message : str
        Description of the problem.
    line : int, optional
        1-based line number of the offending token.
    column : int, optional
        1-based token index within the line.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
