"""Standing planar Lax shocks from the reduced Rankine-Hugoniot system.

The upstream density is fixed to 1; shocks are parametrized by the normal
field ``a``, the downstream density ``rho_plus`` and the transverse invariant
``c = v*b - a*w``. The second transverse invariant ``d = m*w - a*b`` is 0.
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NoShockError
from .model import State, flux_f

log = logging.getLogger(__name__)

# relative slack under which a Lax inequality counts as an equality
_LAX_RTOL = 1e-12


class LaxType(str, enum.Enum):
    SLOW = "slow"
    FAST = "fast"
    NONE = "none"


@dataclass(frozen=True)
class ShockParameters:
    a: float
    rho_plus: float
    c: float = 0.0


@dataclass(frozen=True)
class ShockWave:
    left: State
    right: State
    m: float
    j: float
    c: float
    lax_type: LaxType

    @property
    def a(self):
        return self.left.a

    @property
    def rho_plus(self):
        return self.right.rho


def g_profile(v, a, m, c):
    """Momentum invariant as a function of the normal velocity on one side."""
    if not v > 0:
        raise ValueError(f"g_profile needs v > 0, got {v!r}")
    den = m * v - a * a
    if den == 0:
        raise ValueError("g_profile is singular at v = a^2/m")
    return m * (1.0 + v * v) / v + 0.5 * (m * c / den) ** 2


def _g_partials(v, a, m, c):
    den = m * v - a * a
    g_v = m * (1.0 - 1.0 / (v * v)) - m ** 3 * c * c / den ** 3
    g_m = (1.0 + v * v) / v + m * c * c / den ** 2 - m * m * c * c * v / den ** 3
    return g_v, g_m


def _transverse(v, m, a, c):
    b = c * m / (m * v - a * a)
    return a * b / m, b


def _lax_lt(x, y):
    return x < y and not math.isclose(x, y, rel_tol=_LAX_RTOL, abs_tol=0.0)


def _classify_states(left, right):
    a2 = left.a * left.a
    q_minus = left.rho * left.v ** 2
    q_plus = right.rho * right.v ** 2
    if 0 < q_plus and _lax_lt(q_plus, q_minus) and _lax_lt(q_minus, a2):
        return LaxType.SLOW
    if _lax_lt(a2, q_plus) and _lax_lt(q_plus, q_minus):
        return LaxType.FAST
    return LaxType.NONE


def classify(s: ShockWave) -> LaxType:
    """Strict Lax inequalities for slow/fast shocks; NONE otherwise."""
    return _classify_states(s.left, s.right)


def rh_residual(s: ShockWave) -> float:
    fl = flux_f(s.left)
    fr = flux_f(s.right)
    return float(np.max(np.abs(fl - fr)) / max(1.0, np.max(np.abs(fl))))


def _build(a, rho_plus, c, v_minus, v_plus=None):
    m = v_minus
    if v_plus is None:
        v_plus = v_minus / rho_plus
    if c == 0:
        w_l = b_l = w_r = b_r = 0.0
    else:
        w_l, b_l = _transverse(v_minus, m, a, c)
        w_r, b_r = _transverse(v_plus, m, a, c)
    left = State(1.0, v_minus, w_l, a, b_l)
    right = State(rho_plus, v_plus, w_r, a, b_r)
    j = m * v_minus + 1.0 + 0.5 * b_l * b_l
    return ShockWave(left, right, m, j, c, _classify_states(left, right))


def parallel_shock(a: float, rho_plus: float) -> ShockWave:
    """Closed-form shock with ``b = w = 0`` on both sides (``c = 0``).

    The Lax type depends on ``a`` through the classification only; the
    gas-dynamical profile ``v- = sqrt(rho+)``, ``v+ = 1/sqrt(rho+)`` does not.
    """
    if not rho_plus > 1:
        raise NoShockError(f"rho_plus={rho_plus!r} <= 1: j/m <= 2, no compressive shock")
    v_minus = math.sqrt(rho_plus)
    return _build(a, rho_plus, 0.0, v_minus, 1.0 / v_minus)


def _h(v, a, rho_plus, c):
    """Mismatch of the momentum invariant between the two sides, with ``m = v``."""
    return g_profile(v, a, v, c) - g_profile(v / rho_plus, a, v, c)


def _dh(v, a, rho_plus, c):
    gv1, gm1 = _g_partials(v, a, v, c)
    gv2, gm2 = _g_partials(v / rho_plus, a, v, c)
    return gv1 + gm1 - (gv2 / rho_plus + gm2)


def _safeguarded_newton(f, df, lo, hi, tol=1e-13, maxiter=200):
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo > 0:
        lo, hi = hi, lo
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x)
        if abs(fx) <= tol:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        d = df(x)
        step_ok = d != 0 and np.isfinite(d)
        if step_ok:
            xn = x - fx / d
            step_ok = min(lo, hi) < xn < max(lo, hi)
        if not step_ok:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 4e-16 * abs(x):
            return xn
        x = xn
    raise ConvergenceError(f"scalar Rankine-Hugoniot root did not converge (|h|={abs(f(x)):.3e})")


def _bracket(f, seed, floor, cap, eta=1e-3, grow=4.0):
    while True:
        lo = max(seed * (1.0 - eta), floor)
        hi = min(seed * (1.0 + eta), cap)
        if f(lo) * f(hi) < 0:
            return lo, hi
        if lo == floor and hi == cap:
            return None
        eta *= grow


def _count_sign_changes(f, lo, hi, n=64):
    xs = np.linspace(lo, hi, n)
    vals = np.sign([f(x) for x in xs])
    return int(np.count_nonzero(np.diff(vals[vals != 0])))


def solve_shock(p: ShockParameters, branch: str = "slow") -> ShockWave:
    """Shock with upstream density 1 and the given ``(a, rho_plus, c)``.

    Solves ``g(v-) = g(v-/rho_plus)`` (with ``m = v-``) for the upstream
    velocity, then recovers ``b, w`` on each side from the transverse
    invariants. ``branch`` selects slow (both velocities below ``a^2/m``) or
    fast (both above).
    """
    a, rho_plus, c = p.a, p.rho_plus, p.c
    want = LaxType(branch)
    if want is LaxType.NONE:
        raise ValueError("branch must be 'slow' or 'fast'")
    if not rho_plus > 1:
        raise NoShockError(f"rho_plus={rho_plus!r} <= 1: no compressive shock")
    if a == 0 and want is LaxType.SLOW:
        raise NoShockError("slow shocks need a != 0")

    if c == 0:
        s = parallel_shock(a, rho_plus)
        if s.lax_type is not want:
            raise NoShockError(f"parallel shock at a={a}, rho_plus={rho_plus} is {s.lax_type.value}, not {branch}")
        return s

    if want is LaxType.SLOW:
        # v- < a keeps both sides below the singular point m v = a^2
        floor, cap = 1e-12, abs(a) * (1.0 - 1e-13)
    else:
        floor, cap = abs(a) * math.sqrt(rho_plus) * (1.0 + 1e-13), 1e6 * max(1.0, math.sqrt(rho_plus))
    seed = min(max(math.sqrt(rho_plus), floor * (1 + 1e-6)), cap * (1 - 1e-6))

    f = lambda v: _h(v, a, rho_plus, c)
    br = _bracket(f, seed, floor, cap)
    if br is None:
        raise NoShockError(f"no {branch} root in ({floor:.6g}, {cap:.6g}) for a={a}, rho_plus={rho_plus}, c={c}")
    lo, hi = br
    if _count_sign_changes(f, lo, hi) > 1:
        raise ConvergenceError(f"multiple sign changes of the RH mismatch in [{lo:.6g}, {hi:.6g}]")
    v_minus = _safeguarded_newton(f, lambda v: _dh(v, a, rho_plus, c), lo, hi)
    log.debug("solve_shock a=%g rho+=%g c=%g -> v-=%.17g", a, rho_plus, c, v_minus)

    s = _build(a, rho_plus, c, v_minus)
    if s.lax_type is not want:
        raise NoShockError(f"root v-={v_minus:.6g} violates the strict {branch} Lax inequalities")
    return s


def shock(a, rho_plus, c=0.0, branch="slow"):
    """Shorthand for ``solve_shock(ShockParameters(a, rho_plus, c), branch)``."""
    return solve_shock(ShockParameters(a, rho_plus, c), branch)
