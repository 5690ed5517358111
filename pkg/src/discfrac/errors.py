"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class DiscFracError(Exception):
    """Base class for errors raised by :mod:`discfrac`."""


class PoleError(DiscFracError, ValueError):
    """The order sits on a pole of the Gamma function (0, -1, -2, ...)."""


class WindowTooSmall(DiscFracError):
    """A certified truncation bound exceeds the requested tolerance."""


class NotInDomain(DiscFracError, ValueError):
    """The input does not belong to the admissible class for the operator."""


class ExtensionRequired(DiscFracError):
    """Values outside the window are needed but the extension leaves them undefined."""


class QuadratureNotConverged(DiscFracError):
    """Successive quadrature refinements failed to agree."""


class CrossCheckFailed(DiscFracError):
    """Two independent evaluation routes disagree beyond tolerance."""


class CaseConstraintViolated(DiscFracError, ValueError):
    """The (alpha, beta, k) parameters fall outside the requested estimate case."""


class ParseError(DiscFracError, ValueError):
    """A signal file is malformed."""


class DuplicateIndex(ParseError):
    """A signal file lists the same index twice."""
