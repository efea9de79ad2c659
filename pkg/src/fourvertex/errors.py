"""Exception types shared across the package."""


class ShapeMismatch(ValueError):
    """Operands disagree in chain length or local dimension."""


class CapExceeded(ValueError):
    """A dense realization or enumeration would exceed its configured size cap."""


class ParseError(ValueError):
    """Text input could not be parsed.

    Parameters
    ----------
    message : str
        Description of the problem.
    line : int, optional
        1-based line number of the offending input, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DepthExceeded(ValueError):
    """Bracket nesting deeper than the configured cap."""


class UnresolvedBracket(KeyError):
    """An elementary bracket has no table entry in strict substitution."""
