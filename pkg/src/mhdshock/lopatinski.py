"""Lopatinski determinant of a standing shock.

For a frequency pair ``(lam, omega)`` with ``Re lam > 0`` the Lopatinski
matrices ``L = (lam I + i omega B) A^-1`` on either side have no spectrum on
the imaginary axis. The determinant stacks a basis of the stable space of
``L-`` (upstream), the jump vector, and a basis of the unstable space of
``L+`` (downstream). Values on the imaginary axis are limits from the right
half plane.

Two normalizations are used for the subspace bases:

* ``stable_basis`` / ``unstable_basis`` return orthonormal Schur vectors with
  a deterministic column phase; ``sigma_min`` is computed from these and is
  independent of any basis choice.
* ``delta`` itself uses the basis whose rows ``S`` form the identity
  (``Q @ inv(Q[S])``). That basis depends analytically on ``lam``, so the
  determinant is holomorphic and Newton iterations and axis extrapolation
  behave well.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .errors import (
    AxisUnresolvedError,
    DimMismatchError,
    NeutralSplittingError,
    SingularAError,
    ZeroJumpError,
)
from .model import State, conserved, flux_g, model_matrices
from .shock import LaxType, ShockWave

SPLIT_TOL = 1e-10
AXIS_EPS = 1e-7
_COND_MAX = 1e12
# relative change of the axis basis between eps and its extrapolation
_AXIS_RTOL = 0.1


@dataclass(frozen=True)
class SpectralPoint:
    lam: complex
    omega: float = 1.0

    def __post_init__(self):
        lam = complex(self.lam)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "omega", float(self.omega))
        if lam == 0 and self.omega == 0:
            raise ValueError("(lambda, omega) = (0, 0) is excluded")
        if lam.real < 0:
            raise ValueError(f"Re lambda = {lam.real!r} < 0 is outside S+")

    def scaled(self, t):
        return SpectralPoint(t * self.lam, t * self.omega)


@dataclass(frozen=True)
class DeltaValue:
    delta: complex
    sigma_min: float
    dim_stable_minus: int
    dim_unstable_plus: int
    regularized: Optional[float] = None
    rows: Tuple[Tuple[int, ...], Tuple[int, ...]] = ((), ())


def expected_dims(lax_type: LaxType) -> Tuple[int, int]:
    """Dimensions ``(d-, d+)`` of the upstream stable / downstream unstable spaces."""
    if lax_type is LaxType.SLOW:
        return 1, 3
    if lax_type is LaxType.FAST:
        return 0, 4
    raise DimMismatchError(f"no subspace dimensions for a {lax_type.value!r} shock")


def lopatinski_matrix(s: State, pt: SpectralPoint) -> np.ndarray:
    mm = model_matrices(s)
    if np.linalg.cond(mm.A) > _COND_MAX:
        raise SingularAError(f"A is numerically singular at {s}")
    M = pt.lam * np.eye(5) + 1j * pt.omega * mm.B
    # M A^-1 without forming the inverse
    return np.linalg.solve(mm.A.T, M.T).T


def _fix_phases(Q):
    Q = Q.copy()
    for k in range(Q.shape[1]):
        col = Q[:, k]
        i = int(np.argmax(np.abs(col)))
        Q[:, k] = col * (abs(col[i]) / col[i])
    return Q


def _invariant_subspace(L, expected_dim, side, split_tol):
    ev = np.linalg.eigvals(L)
    if np.min(np.abs(ev.real)) < split_tol:
        raise NeutralSplittingError(
            f"eigenvalue with |Re| = {np.min(np.abs(ev.real)):.3e} < {split_tol:g}: no consistent splitting")
    select = (lambda z: z.real < 0) if side < 0 else (lambda z: z.real > 0)
    _, Z, k = scipy.linalg.schur(np.asarray(L, dtype=complex), output="complex", sort=select)
    if k != expected_dim:
        name = "stable" if side < 0 else "unstable"
        raise DimMismatchError(f"{name} space has dimension {k}, expected {expected_dim}")
    return _fix_phases(Z[:, :k])


def stable_basis(L: np.ndarray, expected_dim: int, split_tol: float = SPLIT_TOL) -> np.ndarray:
    """Orthonormal basis (5 x expected_dim) of the Re < 0 invariant subspace of ``L``."""
    return _invariant_subspace(L, expected_dim, -1, split_tol)


def unstable_basis(L: np.ndarray, expected_dim: int, split_tol: float = SPLIT_TOL) -> np.ndarray:
    """Orthonormal basis (5 x expected_dim) of the Re > 0 invariant subspace of ``L``."""
    return _invariant_subspace(L, expected_dim, +1, split_tol)


def jump_vector(s: ShockWave, pt: SpectralPoint) -> np.ndarray:
    du = conserved(s.right) - conserved(s.left)
    dg = flux_g(s.right) - flux_g(s.left)
    return pt.lam * du + 1j * pt.omega * dg


def jump_scale(s: ShockWave) -> float:
    """Fixed, frequency-independent scale used to normalize the jump vector."""
    du = conserved(s.right) - conserved(s.left)
    dg = flux_g(s.right) - flux_g(s.left)
    return float(np.linalg.norm(np.concatenate([du, dg])))


def pivot_rows(Q: np.ndarray) -> Tuple[int, ...]:
    """Row set used for the analytic normalization of a basis ``Q``.

    The lexicographically first ``d``-subset whose minor is at least half the
    largest one; this keeps the choice stable under small perturbations.
    """
    n, d = Q.shape
    if d == 0:
        return ()
    subsets = list(itertools.combinations(range(n), d))
    dets = np.array([abs(np.linalg.det(Q[list(S), :])) for S in subsets])
    best = dets.max()
    for S, val in zip(subsets, dets):
        if val >= 0.5 * best:
            return S
    raise AssertionError("unreachable")


def _normalize(Q, rows):
    if Q.shape[1] == 0:
        return Q
    return Q @ np.linalg.inv(Q[list(rows), :])


class _Sides:
    """Subspace data of one shock at one frequency pair."""

    def __init__(self, s, lam, omega, split_tol=SPLIT_TOL):
        d_minus, d_plus = expected_dims(s.lax_type)
        pt = _RawPoint(lam, omega)
        self.q_minus = stable_basis(lopatinski_matrix(s.left, pt), d_minus, split_tol)
        self.q_plus = unstable_basis(lopatinski_matrix(s.right, pt), d_plus, split_tol)
        self.dims = (d_minus, d_plus)

    def rows(self):
        return pivot_rows(self.q_minus), pivot_rows(self.q_plus)

    def analytic(self, rows):
        return _normalize(self.q_minus, rows[0]), _normalize(self.q_plus, rows[1])


@dataclass(frozen=True)
class _RawPoint:
    # SpectralPoint without the S+ guard; regularized evaluations stay in Re > 0
    lam: complex
    omega: float


def _jump_columns(s, lam, omega):
    J = jump_vector(s, _RawPoint(lam, omega))
    scale = jump_scale(s)
    norm = np.linalg.norm(J)
    if scale == 0 or norm < 1e-14 * max(scale, 1.0) or norm < 1e-300:
        raise ZeroJumpError("jump vector vanishes; cannot normalize")
    return J / scale, J / norm


def _sigma_min(r_minus, j_unit, r_plus):
    blocks = []
    if r_minus.shape[1]:
        blocks.append(np.linalg.qr(r_minus)[0])
    blocks.append(j_unit[:, None])
    blocks.append(np.linalg.qr(r_plus)[0])
    return float(np.linalg.svd(np.hstack(blocks), compute_uv=False)[-1])


def _assemble(s, r_minus, r_plus, lam, omega, dims, rows, regularized=None):
    j_scaled, j_unit = _jump_columns(s, lam, omega)
    M = np.column_stack([r_minus, j_scaled, r_plus])
    return DeltaValue(
        delta=complex(np.linalg.det(M)),
        sigma_min=_sigma_min(r_minus, j_unit, r_plus),
        dim_stable_minus=dims[0],
        dim_unstable_plus=dims[1],
        regularized=regularized,
        rows=rows,
    )


def delta(s: ShockWave, pt: SpectralPoint, rows=None, split_tol: float = SPLIT_TOL) -> DeltaValue:
    """Lopatinski determinant at an interior point ``Re lam > 0``.

    ``rows`` fixes the normalization row sets ``(S-, S+)``; pass the
    ``rows`` of an earlier result to keep a family of evaluations on one
    smooth branch. Degree-one homogeneous in ``(lam, omega)``.
    """
    _jump_columns(s, pt.lam, pt.omega)
    sides = _Sides(s, pt.lam, pt.omega, split_tol)
    rows = rows if rows is not None else sides.rows()
    r_minus, r_plus = sides.analytic(rows)
    return _assemble(s, r_minus, r_plus, pt.lam, pt.omega, sides.dims, rows)


def delta_regularized(s: ShockWave, lam: complex, omega: float, eps: float = AXIS_EPS, rows=None,
                      split_tol: float = SPLIT_TOL) -> DeltaValue:
    """Delta at ``lam`` with a two-point limit when ``lam`` is at or near the axis.

    For ``Re lam`` below ``100 * eps * scale`` the subspace bases are computed at
    ``max(Re lam, 0) + eps*scale`` and ``+ 2*eps*scale`` (``scale =
    max(1, |Im lam|)``) and extrapolated linearly back to ``Re lam``; small
    negative real parts are therefore allowed. The jump vector is linear and
    evaluated exactly.
    """
    lam = complex(lam)
    scale = max(1.0, abs(lam.imag))
    h = eps * scale
    if lam.real >= 100.0 * h:
        return delta(s, SpectralPoint(lam, omega), rows=rows, split_tol=split_tol)

    base = max(lam.real, 0.0)
    s1 = _Sides(s, complex(base + h, lam.imag), omega, split_tol)
    s2 = _Sides(s, complex(base + 2 * h, lam.imag), omega, split_tol)
    rows = rows if rows is not None else s1.rows()
    m1, p1 = s1.analytic(rows)
    m2, p2 = s2.analytic(rows)
    t = (base + h - lam.real) / h
    r_minus = m1 + t * (m1 - m2)
    r_plus = p1 + t * (p1 - p2)
    for one_sided, limit in ((m1, r_minus), (p1, r_plus)):
        if limit.size and np.linalg.norm(one_sided - limit) > _AXIS_RTOL * np.linalg.norm(limit):
            raise AxisUnresolvedError(
                f"axis limit at lambda={lam} changes by more than {_AXIS_RTOL:.0%}; shrink eps")
    return _assemble(s, r_minus, r_plus, lam, omega, s1.dims, rows, regularized=eps)


def delta_on_axis(s: ShockWave, gamma: float, omega: float = 1.0, eps: float = AXIS_EPS,
                  rows=None) -> DeltaValue:
    """Kreiss limit of delta at ``lam = i*gamma`` from the right half plane."""
    if gamma == 0 and omega == 0:
        raise ValueError("(lambda, omega) = (0, 0) is excluded")
    if not eps > 0:
        raise ValueError("eps must be positive")
    return delta_regularized(s, complex(0.0, gamma), omega, eps=eps, rows=rows)


def theorem1_vectors(a: float, rho_plus: float):
    """Closed-form subspace bases at ``(lam, omega) = (0, 1)`` for a slow parallel shock.

    Returns ``(r_minus, r_plus)`` with shapes ``(5,)`` and ``(5, 3)``.
    """
    arg = (a * a - rho_plus) * (a * a / rho_plus - 1.0 / (1.0 - rho_plus)) if rho_plus > 1 else 0.0
    if not arg > 0:
        raise ValueError(f"closed-form vectors need 1 < rho_plus < a^2, got a={a}, rho_plus={rho_plus}")
    sr = math.sqrt(rho_plus)
    r_minus = np.array([1.0, sr, -1j * math.sqrt(arg), a, 0.0], dtype=complex)
    r_plus = np.array([
        [sr, a * (rho_plus - 1.0), 0.0],
        [2.0, 0.0, 0.0],
        [0.0, 0.0, -a * sr],
        [0.0, 2.0, 0.0],
        [0.0, 0.0, 1.0],
    ], dtype=complex)
    return r_minus, r_plus


def theorem1_determinant(a: float, rho_plus: float) -> complex:
    """Determinant of the closed-form bases with the jump direction ``(0, 0, i, 0, 0)``."""
    r_minus, r_plus = theorem1_vectors(a, rho_plus)
    j = np.array([0, 0, 1j, 0, 0])
    return complex(np.linalg.det(np.column_stack([r_minus, j, r_plus])))


def theorem1_closed_form(a: float, rho_plus: float) -> complex:
    return 2j * (rho_plus * (a * a + 1.0) - (a * a + 2.0))


def critical_density(a: float) -> float:
    """Downstream density at which a slow parallel shock has a zero at lam = 0."""
    return (a * a + 2.0) / (a * a + 1.0)
