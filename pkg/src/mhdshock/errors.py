"""Exception hierarchy shared by the solver modules and the CLI."""


class MHDShockError(Exception):
    """Base class. ``kind`` is the short name the CLI prints."""

    kind = "error"


class NoShockError(MHDShockError):
    """No admissible (Lax) shock exists for the requested parameters."""

    kind = "noshock"


class ConvergenceError(MHDShockError):
    """An iteration failed to converge.

    ``index`` is the grid position of the failure for traces; ``partial``
    holds whatever was computed before it.
    """

    kind = "converge"

    def __init__(self, msg, index=None, partial=None):
        super().__init__(msg)
        self.index = index
        self.partial = partial if partial is not None else []


class SingularAError(MHDShockError):
    """The normal quasilinear matrix is numerically singular (characteristic state)."""

    kind = "singular_a"


class NeutralSplittingError(MHDShockError):
    """An eigenvalue of a Lopatinski matrix sits on the imaginary axis."""

    kind = "neutral_splitting"


class DimMismatchError(MHDShockError):
    kind = "dim_mismatch"


class ZeroJumpError(MHDShockError):
    kind = "zero_jump"


class AxisUnresolvedError(MHDShockError):
    """The two-point limit onto the imaginary axis is not trustworthy."""

    kind = "axis_unresolved"


class LeftHalfPlaneError(MHDShockError):
    kind = "left_half_plane"


class NoBracketError(MHDShockError):
    kind = "nobracket"
