"""Ideal isothermal MHD in two space dimensions (sound speed scaled to 1).

All vectors use the ordering ``U = (rho, rho*v, rho*w, b1, b2)`` where ``v, w``
are the normal/transverse velocities and ``b1 = a`` (constant for planar
waves), ``b2 = b`` the magnetic field components. Pressure is ``p = rho``.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class State:
    """One-sided fluid/field state ``(rho, v, w, a, b)``."""

    rho: float
    v: float
    w: float
    a: float
    b: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"density must be positive, got {self.rho!r}")

    def conserved(self) -> np.ndarray:
        return conserved(self)

    def as_tuple(self):
        return (self.rho, self.v, self.w, self.a, self.b)


@dataclass(frozen=True)
class ModelMatrices:
    A: np.ndarray
    B: np.ndarray
    A_tilde: np.ndarray
    B_tilde: np.ndarray
    D: np.ndarray
    T: np.ndarray
    T_inv: np.ndarray


def conserved(s: State) -> np.ndarray:
    return np.array([s.rho, s.rho * s.v, s.rho * s.w, s.a, s.b])


def flux_f(s: State) -> np.ndarray:
    """Normal (x-direction) flux F(U)."""
    rho, v, w, a, b = s.as_tuple()
    return np.array([
        rho * v,
        rho * v * v + rho + 0.5 * (b * b - a * a),
        rho * v * w - a * b,
        0.0,
        b * v - w * a,
    ])


def flux_g(s: State) -> np.ndarray:
    """Transverse (y-direction) flux G(U)."""
    rho, v, w, a, b = s.as_tuple()
    return np.array([
        rho * w,
        rho * w * v - b * a,
        rho * w * w + rho + 0.5 * (a * a - b * b),
        a * w - v * b,
        0.0,
    ])


def model_matrices(s: State) -> ModelMatrices:
    """Symmetric-hyperbolic matrices and the quasilinear ``A = T D^-1 A~ T^-1``.

    ``A`` and ``B`` are not the flux Jacobians: the divergence constraint has
    been used to symmetrize the system.
    """
    rho, v, w, a, b = s.as_tuple()
    A_t = np.array([
        [v / rho, 1.0, 0.0, 0.0, 0.0],
        [1.0, rho * v, 0.0, 0.0, b],
        [0.0, 0.0, rho * v, 0.0, -a],
        [0.0, 0.0, 0.0, v, 0.0],
        [0.0, b, -a, 0.0, v],
    ])
    B_t = np.array([
        [w / rho, 0.0, 1.0, 0.0, 0.0],
        [0.0, rho * w, 0.0, -b, 0.0],
        [1.0, 0.0, rho * w, a, 0.0],
        [0.0, -b, a, w, 0.0],
        [0.0, 0.0, 0.0, 0.0, w],
    ])
    d = np.array([1.0 / rho, rho, rho, 1.0, 1.0])

    T = np.eye(5)
    T[1, 0], T[2, 0] = v, w
    T[1, 1] = T[2, 2] = rho
    # block-triangular inverse, no generic inversion
    T_inv = np.eye(5)
    T_inv[1, 0], T_inv[2, 0] = -v / rho, -w / rho
    T_inv[1, 1] = T_inv[2, 2] = 1.0 / rho

    A = T @ (A_t / d[:, None]) @ T_inv
    B = T @ (B_t / d[:, None]) @ T_inv
    return ModelMatrices(A=A, B=B, A_tilde=A_t, B_tilde=B_t, D=np.diag(d), T=T, T_inv=T_inv)


def magnetosonic_speeds(rho, a, b):
    """Return ``(c_slow, c_fast)`` for unit sound speed."""
    q = 1.0 + (a * a + b * b) / rho
    disc = np.sqrt(max(q * q - 4.0 * a * a / rho, 0.0))
    cf2 = 0.5 * (q + disc)
    # product of the roots is a^2/rho; avoids cancellation in the slow root
    cs2 = (a * a / rho) / cf2
    return np.sqrt(cs2), np.sqrt(cf2)


def characteristic_speeds(s: State, check: bool = False) -> np.ndarray:
    """Sorted eigenvalues ``v, v +- c_s, v +- c_f`` of ``A(s)``.

    With ``check=True`` the closed form is compared against a dense
    eigensolve of ``A`` and a ``RuntimeError`` is raised on disagreement
    beyond 1e-9.
    """
    cs, cf = magnetosonic_speeds(s.rho, s.a, s.b)
    v = s.v
    speeds = np.sort(np.array([v - cf, v - cs, v, v + cs, v + cf]))
    if check:
        dense = np.sort(np.linalg.eigvals(model_matrices(s).A).real)
        err = np.max(np.abs(dense - speeds))
        if err > 1e-9 * max(1.0, np.max(np.abs(speeds))):
            raise RuntimeError(f"closed-form speeds disagree with eigensolve by {err:.3e}")
    return speeds
