#!/usr/bin/env python3
"""
Error Hierarchy for lctlab
==========================

Every failure raised by the numerical modules derives from ``LctError``.
The three families map one-to-one onto the CLI exit codes:

* ``ParseError``        -> exit 2 (bad specs, malformed files)
* ``PreconditionError`` -> exit 3 (inputs outside the domain of a transform)
* ``NumericError``      -> exit 4 (results that fail an internal sanity check)
"""

from typing import Any, Dict, Optional


class LctError(Exception):
    """Base class for all lctlab errors"""

    exit_code: int = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form used for the stderr JSON of the CLI"""
        payload = {"error": type(self).__name__, "message": self.message, "exit_code": self.exit_code}
        for key, value in self.details.items():
            payload[key] = value
        return payload


# --- parse errors (exit 2) ---

class ParseError(LctError):
    exit_code = 2


class SpecParseError(ParseError, ValueError):
    """A matrix or signal spec string could not be understood"""


class CsvParseError(ParseError):
    """A signal CSV file is malformed"""

    def __init__(self, message: str, line: Optional[int] = None, **details: Any):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, line=line, **details)
        self.line = line


class NonuniformGrid(ParseError):
    """Sample abscissae are not uniformly spaced"""


# --- precondition errors (exit 3) ---

class PreconditionError(LctError):
    exit_code = 3


class OddDimension(PreconditionError, ValueError):
    pass


class NotFree(PreconditionError):
    """The upper-right block B is (numerically) singular"""


class BadParameter(PreconditionError, ValueError):
    pass


class SingularCoupling(PreconditionError):
    """det of the coupling matrix vanishes, so the induced form is degenerate"""


class NotAntisymmetric(PreconditionError, ValueError):
    pass


class NotSeparable(PreconditionError):
    pass


class GridMismatch(PreconditionError, ValueError):
    pass


class SingularL(PreconditionError, ValueError):
    pass


class DegenerateLine(PreconditionError, ValueError):
    pass


class MomentOrderTooHigh(PreconditionError, ValueError):
    pass


class NotNormalized(PreconditionError):
    pass


class MeanNotCentered(PreconditionError):
    pass


class NotInSpTheta(PreconditionError):
    pass


class DegeneratePair(PreconditionError):
    pass


class NotSPD(PreconditionError, ValueError):
    pass


class SupportViolation(PreconditionError):
    pass


class HeavyTails(PreconditionError):
    """The transformed density does not decay inside the window"""


class InsufficientDecay(PreconditionError):
    """The envelope is not Gaussian enough for a decay fit"""


class AliasRisk(PreconditionError):
    """A chirp factor would be under-sampled on the current grid

    ``side`` is ``"input"`` (the grid must be refined by ``required_factor``)
    or ``"output"`` (use at least ``required_factor`` as oversample).
    """

    def __init__(self, message: str, side: str, required_factor: int, margin: float):
        super().__init__(message, side=side, required_factor=required_factor, margin=margin)
        self.side = side
        self.required_factor = required_factor
        self.margin = margin


# --- numeric errors (exit 4) ---

class NumericError(LctError):
    exit_code = 4


class ImaginaryResidual(NumericError):
    pass


class NotSymplectic(NumericError, ValueError):
    """A matrix that should be symplectic fails the SᵀJS = J certificate"""
