"""Planar shocks of ideal isothermal MHD and zeros of their Lopatinski determinant."""

__version__ = "0.1.0"

from .errors import (
    AxisUnresolvedError,
    ConvergenceError,
    DimMismatchError,
    LeftHalfPlaneError,
    MHDShockError,
    NeutralSplittingError,
    NoBracketError,
    NoShockError,
    SingularAError,
    ZeroJumpError,
)
from .lopatinski import (
    DeltaValue,
    SpectralPoint,
    critical_density,
    delta,
    delta_on_axis,
    jump_vector,
    lopatinski_matrix,
    stable_basis,
    theorem1_vectors,
    unstable_basis,
)
from .model import State, characteristic_speeds, flux_f, flux_g, model_matrices
from .shock import LaxType, ShockParameters, ShockWave, classify, g_profile, parallel_shock, rh_residual, shock, solve_shock
from .tracker import (
    CriticalPoint,
    ModePoint,
    find_root,
    solve_critical_point,
    trace_critical_curve,
    trace_instability,
    verify_theorem1,
)
