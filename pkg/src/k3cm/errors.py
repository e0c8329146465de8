"""Exception hierarchy shared by every module of the package."""


class K3CMError(Exception):
    """Base class for all errors raised by k3cm."""


class InvalidInput(K3CMError, ValueError):
    """Input outside an operation's domain (a rejected precondition)."""


class InconsistentData(K3CMError):
    """Assumption flags that contradict each other for the given field data.

    The canonical case: both Artin-invariant hypotheses are asserted while the
    place of E is ramified over the place of its real subfield, which those
    hypotheses rule out.
    """


class PrecisionError(K3CMError):
    """A finite-precision computation could not reach the requested precision."""

    def __init__(self, message: str, achieved: int):
        super().__init__(message)
        self.achieved = achieved


class InternalError(K3CMError):
    """A state that a correct computation never reaches."""
