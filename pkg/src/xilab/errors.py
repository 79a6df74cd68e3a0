"""Exception types shared across the package."""


class XilabError(Exception):
    """Base class for all package errors."""


class ValidationError(XilabError):
    """Invalid input: bad set spec, malformed config, out-of-domain argument."""


class StatisticalAbortError(XilabError):
    """An experiment produced no usable statistics (e.g. zero survivors)."""


class FitError(XilabError):
    """A regression could not be performed on the supplied curve."""


class InsufficientDataError(FitError):
    """Too few populated horizons inside the fit window."""


class EmptyBracketError(XilabError):
    """Subadditivity bounds are mutually inconsistent (empty intersection)."""

    def __init__(self, lower: float, upper: float):
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"empty bracket: max lower bound {lower:.6g} exceeds min upper "
            f"bound {upper:.6g}; the supplied multiplicativity constants are invalid"
        )
