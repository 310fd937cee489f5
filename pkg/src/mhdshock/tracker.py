"""Zeros of the Lopatinski determinant and their continuation in parameters.

Three problems are solved here:

* the critical manifold: for given ``(a, c)`` find the downstream density
  ``R`` and axis frequency ``gamma`` with ``Delta(i*gamma, +1) = 0``;
* the unstable branch: hold ``rho_plus = R(a0, c)``, move ``a = a0 + xi`` and
  follow the zero ``lam = alpha + i*beta`` into the right half plane;
* the parallel-shock check, bisecting ``rho_plus`` for the zero at ``lam = 0``.

All convergence certificates are ``sigma_min`` values, which do not depend on
the choice of subspace bases. Only ``omega = +1`` is solved for; the partner
zero at ``(conj(lam), -1)`` follows from the realness of the model matrices
and is checked by ``conjugate_residual``.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.optimize

from .errors import ConvergenceError, LeftHalfPlaneError, MHDShockError, NoBracketError, NoShockError
from .lopatinski import AXIS_EPS, critical_density, delta_on_axis, delta_regularized
from .shock import LaxType, parallel_shock, shock

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
ROOT_TOL = 1e-10
NEWTON_TOL = 1e-12


@dataclass(frozen=True)
class CriticalPoint:
    a: float
    c: float
    R: float
    gamma: float
    residual: float


@dataclass(frozen=True)
class ModePoint:
    a0: float
    c: float
    xi: float
    alpha: float
    beta: float
    residual: float
    rho_plus: float = math.nan

    @property
    def a(self):
        return self.a0 + self.xi


@dataclass(frozen=True)
class Root:
    lam: complex
    residual: float
    iterations: int


@dataclass(frozen=True)
class Theorem1Row:
    a: float
    rho_formula: float
    rho_numeric: float
    gap: float
    status: str


class Trace(list):
    """List of trace points with the empirical edges of the solvable range.

    ``boundary`` is the last grid value on the low side at which no solution
    was found (None if the first grid point solved); ``stopped_at`` is the
    grid value at which a forward trace ran out of shocks.
    """

    boundary: Optional[float] = None
    stopped_at: Optional[float] = None


def _fd_step(x):
    return 1e-7 * max(1.0, abs(x))


def find_root(s, omega=1.0, lambda0=0.0, axis_constrained=False, tol=ROOT_TOL, eps=AXIS_EPS,
              trust_radius=0.5, max_iter=100, rows=None) -> Root:
    """Zero of ``lam -> Delta(lam, omega)`` for the shock ``s`` near ``lambda0``.

    Damped Newton with a finite-difference derivative on the holomorphic
    (row-normalized) determinant; with ``axis_constrained`` the unknown is
    ``gamma`` in ``lam = i*gamma`` and the step is the Gauss-Newton step for
    the two real equations. Stagnation falls back to Nelder-Mead on
    ``sigma_min``.
    """
    lam0 = complex(lambda0)
    if axis_constrained:
        lam0 = complex(0.0, lam0.imag)
    ev = lambda z: delta_regularized(s, z, omega, eps=eps, rows=rows)
    cur = ev(lam0)
    rows = cur.rows
    lam = lam0
    stalled = False
    it = 0

    for it in range(1, max_iter + 1):
        if cur.sigma_min <= 1e-3 * tol:
            it -= 1
            break
        h = _fd_step(abs(lam))
        if axis_constrained:
            d = (ev(lam + 1j * h).delta - cur.delta) / h
            step = 1j * (-(np.conj(d) * cur.delta).real / abs(d) ** 2) if d != 0 else 0j
        else:
            d = (ev(lam + h).delta - cur.delta) / h
            step = -cur.delta / d if d != 0 else 0j
        if not np.isfinite(step) or step == 0:
            stalled = True
            break
        if abs(step) > trust_radius:
            step *= trust_radius / abs(step)

        accepted = False
        for _ in range(30):
            trial = lam + step
            if abs(trial - lam0) > trust_radius:
                step *= 0.5
                continue
            if trial.real < -1e-6:
                step *= 0.5
                continue
            try:
                nxt = ev(trial)
            except MHDShockError:
                step *= 0.5
                continue
            if abs(nxt.delta) < abs(cur.delta) or abs(step) <= 1e-13 * max(1.0, abs(lam)):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            stalled = True
            break
        lam, cur = trial, nxt
        if abs(step) <= 1e-13 * max(1.0, abs(lam)):
            break
    else:
        stalled = True

    if cur.sigma_min > tol and stalled:
        lam, cur = _polish(ev, lam, axis_constrained)
    if lam.real < -1e-6:
        raise LeftHalfPlaneError(f"root at lambda={lam} lies outside S+")
    if cur.sigma_min > tol:
        raise ConvergenceError(f"no zero near lambda0={lambda0}: sigma_min={cur.sigma_min:.3e} after {it} steps")
    return Root(lam=lam, residual=cur.sigma_min, iterations=it)


def _polish(ev, lam, axis_constrained):
    log.debug("find_root stalled at %s, switching to Nelder-Mead", lam)

    def obj(x):
        z = complex(0.0, x[0]) if axis_constrained else complex(x[0], x[1])
        try:
            return ev(z).sigma_min
        except MHDShockError:
            return np.inf

    x0 = [lam.imag] if axis_constrained else [lam.real, lam.imag]
    res = scipy.optimize.minimize(obj, x0, method="Nelder-Mead",
                                  options={"xatol": 1e-14, "fatol": 1e-16, "maxiter": 2000})
    z = complex(0.0, res.x[0]) if axis_constrained else complex(res.x[0], res.x[1])
    return z, ev(z)


def _axis_residual_vector(a, c, rho, gamma, omega, eps, rows):
    dv = delta_on_axis(shock(a, rho, c), gamma, omega, eps=eps, rows=rows)
    return np.array([dv.delta.real, dv.delta.imag]), dv


def solve_critical_point(a, c, seed: Optional[CriticalPoint] = None, newton_tol=NEWTON_TOL,
                         eps=AXIS_EPS, residual_tol=RESIDUAL_TOL, max_iter=50,
                         max_step=0.05, max_drift=0.5) -> CriticalPoint:
    """Solve ``Delta(i*gamma, +1) = 0`` for ``(R, gamma)`` at fixed ``(a, c)``.

    Newton on two real unknowns with a forward-difference Jacobian, seeded by
    ``seed`` or by the parallel-shock critical density with ``gamma = 0``.
    Steps are capped at ``max_step`` and the iterate may not move further than
    ``max_drift`` from the seed. Raises ``NoShockError`` when the slow shock
    does not exist at the seed.
    """
    if seed is None:
        x = np.array([critical_density(a), 0.0])
    else:
        x = np.array([seed.R, seed.gamma])
    x_seed = x.copy()
    F, dv = _axis_residual_vector(a, c, x[0], x[1], 1.0, eps, None)
    rows = dv.rows

    for _ in range(max_iter):
        J = np.empty((2, 2))
        for k in range(2):
            xp = x.copy()
            h = _fd_step(x[k])
            xp[k] += h
            J[:, k] = (_axis_residual_vector(a, c, xp[0], xp[1], 1.0, eps, rows)[0] - F) / h
        try:
            dx = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian at a={a}, c={c}, x={x}") from exc
        if np.linalg.norm(dx) > max_step:
            dx *= max_step / np.linalg.norm(dx)

        t = 1.0
        while True:
            xn = x + t * dx
            try:
                Fn, dvn = _axis_residual_vector(a, c, xn[0], xn[1], 1.0, eps, rows)
            except NoShockError:
                Fn = None
            if Fn is not None and (np.linalg.norm(Fn) < np.linalg.norm(F) or t * np.linalg.norm(dx) < 1e-14):
                break
            t *= 0.5
            if t < 1e-6:
                raise ConvergenceError(f"line search failed at a={a}, c={c}, x={x}")
        x, F, dv = xn, Fn, dvn
        if np.linalg.norm(x - x_seed) > max_drift:
            raise ConvergenceError(f"critical point at a={a}, c={c} drifted beyond {max_drift} from the seed")
        if np.linalg.norm(t * dx) <= newton_tol * max(1.0, np.linalg.norm(x)):
            break
    else:
        raise ConvergenceError(f"critical point at a={a}, c={c} did not converge in {max_iter} steps")

    if dv.sigma_min > residual_tol:
        raise ConvergenceError(f"critical point at a={a}, c={c}: residual {dv.sigma_min:.3e} > {residual_tol:g}")
    return CriticalPoint(a=float(a), c=float(c), R=float(x[0]), gamma=float(x[1]), residual=dv.sigma_min)


def conjugate_residual(p: CriticalPoint, eps=AXIS_EPS) -> float:
    """``sigma_min`` at the partner zero ``(-i*gamma, -1)`` of a critical point."""
    return delta_on_axis(shock(p.a, p.R, p.c), -p.gamma, -1.0, eps=eps).sigma_min


def _predict(points, attr_x, attrs, x):
    if len(points) >= 2:
        p0, p1 = points[-2], points[-1]
        x0, x1 = getattr(p0, attr_x), getattr(p1, attr_x)
        if x1 != x0:
            t = (x - x1) / (x1 - x0)
            return [getattr(p1, n) + t * (getattr(p1, n) - getattr(p0, n)) for n in attrs]
    return [getattr(points[-1], n) for n in attrs]


def trace_critical_curve(c, a_from, a_to, steps, seed: Optional[CriticalPoint] = None, **kw) -> List[CriticalPoint]:
    """Natural continuation of ``a -> (R(a, c), gamma(a, c))`` on a uniform grid.

    Leading grid points where no critical point can be found from a cold
    start are skipped; once one solves, the curve is continued upward in
    ``a`` (stopping at the first ``a`` without a slow shock) and then back
    down toward ``a_from`` until it fails. The lower failure is recorded in
    ``.boundary``. Points are returned in grid order.
    """
    if not a_from > 0:
        raise ValueError("a_from must be positive")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    grid = [float(a) for a in np.linspace(a_from, a_to, steps)]
    out = Trace()

    start = None
    for k, a in enumerate(grid):
        try:
            first = solve_critical_point(a, c, seed=seed, **kw)
        except (NoShockError, ConvergenceError):
            log.info("critical curve c=%g: no cold-start solution at a=%g", c, a)
            continue
        start = k
        break
    if start is None:
        out.boundary = grid[-1]
        return out

    upward = [first]
    for i in range(start + 1, len(grid)):
        a = grid[i]
        R, g = _predict(upward, "a", ("R", "gamma"), a)
        try:
            upward.append(solve_critical_point(a, c, seed=CriticalPoint(a, c, R, g, math.nan), **kw))
        except NoShockError:
            out.stopped_at = a
            log.info("critical curve c=%g stops at a=%g: no slow shock", c, a)
            break
        except ConvergenceError as exc:
            raise ConvergenceError(f"critical curve c={c} failed at index {i} (a={a}): {exc}",
                                   index=i, partial=list(upward)) from exc

    downward = [first]
    for i in range(start - 1, -1, -1):
        a = grid[i]
        R, g = _predict(downward, "a", ("R", "gamma"), a)
        try:
            downward.append(solve_critical_point(a, c, seed=CriticalPoint(a, c, R, g, math.nan), **kw))
        except (NoShockError, ConvergenceError):
            out.boundary = a
            break
    else:
        if start > 0:
            out.boundary = grid[start - 1]
    if start > 0 and out.boundary is None:
        out.boundary = grid[0]

    out.extend(reversed(downward[1:]))
    out.extend(upward)
    return out


def trace_instability(a0, c, xi_max=None, steps=None, xi_values=None, critical: Optional[CriticalPoint] = None,
                      seed: Optional[ModePoint] = None, eps=AXIS_EPS, tol=ROOT_TOL) -> List[ModePoint]:
    """Follow the zero ``alpha + i*beta`` for ``a = a0 + xi`` at fixed ``rho_plus = R(a0, c)``.

    The grid is ``linspace(0, xi_max, steps)`` unless ``xi_values`` is given;
    the branch always starts at ``xi = 0`` from ``lam = i*gamma(a0, c)``.
    """
    if xi_values is None:
        if xi_max is None or not xi_max > 0:
            raise ValueError("xi_max must be positive")
        if steps is None or steps < 2:
            raise ValueError("steps must be >= 2")
        xi_values = np.linspace(0.0, xi_max, steps)
    xi_values = sorted(float(x) for x in xi_values)
    if xi_values[0] < 0:
        raise ValueError("xi must be >= 0")

    cp = critical or solve_critical_point(a0, c, eps=eps)
    rho = cp.R
    out = Trace()
    if seed is not None:
        track = [seed]
    else:
        track = [ModePoint(a0, c, 0.0, 0.0, cp.gamma, cp.residual, rho)]
    for i, xi in enumerate(xi_values):
        if xi == 0:
            # re-solve from off the axis rather than accept the critical point as is
            lam0 = complex(1e-4, cp.gamma)
        else:
            alpha, beta = _predict(track, "xi", ("alpha", "beta"), xi)
            lam0 = complex(max(alpha, 0.0), beta)
        try:
            s = shock(a0 + xi, rho, c)
        except NoShockError:
            out.boundary = a0 + xi
            break
        try:
            root = find_root(s, 1.0, lam0, eps=eps, tol=tol)
        except ConvergenceError as exc:
            raise ConvergenceError(f"instability branch a0={a0}, c={c} failed at xi={xi}: {exc}",
                                   index=i, partial=list(out)) from exc
        except LeftHalfPlaneError as exc:
            raise LeftHalfPlaneError(f"instability branch a0={a0}, c={c} left S+ at xi={xi}: {exc}") from exc
        pt = ModePoint(a0, c, xi, root.lam.real, root.lam.imag, root.residual, rho)
        out.append(pt)
        if xi > 0 or not track:
            track.append(pt)
        else:
            track = [pt]
    return out


def verify_theorem1(a_grid, eps=AXIS_EPS, half_width=0.1) -> List[Theorem1Row]:
    """Locate the zero at ``lam = 0`` in ``rho_plus`` for slow parallel shocks.

    Brent's method on the phase-aligned real part of the axis limit of
    ``Delta(., +1)`` on the bracket ``rho_formula -+ half_width``, shrunk to
    stay strictly inside ``1 < rho_plus < a^2``.
    """
    rows = []
    for a in a_grid:
        a = float(a)
        rf = critical_density(a)
        try:
            rows.append(_theorem1_row(a, rf, eps, half_width))
        except NoShockError:
            rows.append(Theorem1Row(a, rf, math.nan, math.nan, "noshock"))
        except NoBracketError:
            rows.append(Theorem1Row(a, rf, math.nan, math.nan, "nobracket"))
    return rows


def _theorem1_row(a, rf, eps, half_width):
    if parallel_shock(a, rf).lax_type is not LaxType.SLOW:
        raise NoShockError(f"critical density {rf} is not a slow shock at a={a}")
    lo = max(rf - half_width, 0.5 * (1.0 + rf))
    hi = min(rf + half_width, 0.5 * (rf + a * a))
    rows = delta_on_axis(parallel_shock(a, rf), 0.0, 1.0, eps=eps).rows
    ev = lambda r: delta_on_axis(parallel_shock(a, r), 0.0, 1.0, eps=eps, rows=rows).delta
    ref = ev(lo)
    phase = np.conj(ref) / abs(ref)
    f = lambda r: (ev(r) * phase).real
    if f(lo) * f(hi) >= 0:
        raise NoBracketError(f"no sign change on [{lo}, {hi}] at a={a}")
    r = scipy.optimize.brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return Theorem1Row(a, rf, r, abs(r - rf), "ok")
