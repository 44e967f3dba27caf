"""Exception hierarchy shared by every laboratory app."""


class LabError(Exception):
    """Base class for laboratory failures."""


class ParameterError(LabError, ValueError):
    """A precondition on an operation's arguments does not hold."""


class GridMismatchError(ParameterError):
    """Two grid-valued inputs do not live on the same grid."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"grid mismatch: {left} vs {right}")


class KernelConstructionError(LabError):
    """The tabulated seed kernel failed its spectral diagnostic."""


class SamplingError(LabError):
    """Spectral factorization clipped more negative mass than budgeted."""


class ConvergenceError(LabError):
    """A truncated series did not meet its stopping rule before the hard cap."""
