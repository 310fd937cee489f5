import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mhdshock.errors import NoShockError
from mhdshock.model import State
from mhdshock.shock import (
    LaxType,
    ShockParameters,
    ShockWave,
    classify,
    g_profile,
    parallel_shock,
    rh_residual,
    shock,
    solve_shock,
)


@pytest.mark.parametrize("args, expected", [
    ((1.0, 2.0, 1.0, 0.0), 2.0),
    ((1.0, 2.0, 1.0, 0.1), 2.0 + 0.5 * (0.1 / 3.0) ** 2),
    ((math.sqrt(1.5), 0.7, math.sqrt(1.5), 0.0), 2.5),
])
def test_g_profile_examples(args, expected):
    assert g_profile(*args) == pytest.approx(expected, rel=1e-15)


def test_g_profile_value_hand_evaluated():
    assert g_profile(1.0, 2.0, 1.0, 0.1) == pytest.approx(2.000555555555556, abs=1e-15)


@pytest.mark.parametrize("v", [0.0, -1.0, 4.0])
def test_g_profile_domain(v):
    with pytest.raises(ValueError):
        g_profile(v, 2.0, 1.0, 0.1)


def test_parallel_slow_example():
    s = parallel_shock(2, 1.5)
    assert s.left.v == pytest.approx(1.224744871391589, rel=1e-15)
    assert s.right.v == pytest.approx(0.816496580927726, rel=1e-15)
    assert s.lax_type is LaxType.SLOW
    assert s.m * s.left.v < 4
    assert rh_residual(s) <= 1e-12


def test_parallel_fast_example():
    s = parallel_shock(0.8, 1.5)
    assert s.lax_type is LaxType.FAST
    assert s.m * s.right.v == pytest.approx(1.0, rel=1e-15)


def test_parallel_boundary_is_none():
    assert parallel_shock(math.sqrt(1.5), 1.5).lax_type is LaxType.NONE


@pytest.mark.parametrize("rho_plus", [1.0, 0.9])
def test_parallel_no_shock(rho_plus):
    with pytest.raises(NoShockError):
        parallel_shock(2, rho_plus)


@pytest.mark.parametrize("rho_plus", [1.01, 1.5, 2.7, 9.0])
def test_parallel_roots(rho_plus):
    s = parallel_shock(5.0, rho_plus)
    assert s.left.v * s.right.v == pytest.approx(1.0, rel=1e-12)
    ratio = s.j / s.m
    # closed form of the two roots of v^2 - (j/m) v + 1
    disc = math.sqrt(ratio ** 2 - 4)
    assert s.left.v == pytest.approx(0.5 * (ratio + disc), rel=1e-12)
    assert s.right.v == pytest.approx(0.5 * (ratio - disc), rel=1e-12)
    for side in (s.left, s.right):
        assert g_profile(side.v, s.a, s.m, 0.0) == pytest.approx(s.j, rel=1e-12)


def test_solve_shock_c0_matches_parallel():
    assert solve_shock(ShockParameters(2, 1.5, 0)) == parallel_shock(2, 1.5)


def test_solve_shock_small_c():
    s = shock(2, 1.5, 0.01)
    assert rh_residual(s) <= 1e-10
    assert abs(s.left.v - math.sqrt(1.5)) < 1e-4
    assert s.lax_type is LaxType.SLOW


def test_solve_shock_sign_flip():
    p, q = shock(2, 1.5, 0.01), shock(2, 1.5, -0.01)
    for x, y in ((p.left, q.left), (p.right, q.right)):
        assert (x.rho, x.v) == (y.rho, y.v)
        assert x.w == -y.w and x.b == -y.b


@settings(max_examples=60, deadline=None)
@given(a=st.floats(1.3, 3.0), frac=st.floats(0.05, 0.95), c=st.floats(-0.01, 0.01))
def test_slow_shock_invariants(a, frac, c):
    rho_plus = 1 + frac * (min(a * a, 3.0) - 1)
    s = shock(a, rho_plus, c)
    assert rh_residual(s) <= 1e-10
    assert s.left.a == s.right.a
    for side in (s.left, s.right):
        assert s.m * side.w - side.a * side.b == pytest.approx(0.0, abs=1e-14)
        assert side.v * side.b - side.a * side.w == pytest.approx(c, abs=1e-14)
        assert g_profile(side.v, a, s.m, c) == pytest.approx(s.j, rel=1e-9)
    assert s.right.v < s.left.v < a * a / s.m
    assert classify(s) is LaxType.SLOW

    r = shock(a, rho_plus, -c)
    np.testing.assert_allclose([r.left.v, r.right.v], [s.left.v, s.right.v], rtol=1e-10)
    np.testing.assert_allclose([r.left.b, r.left.w, r.right.b, r.right.w],
                               [-s.left.b, -s.left.w, -s.right.b, -s.right.w], rtol=1e-10, atol=1e-14)


def test_rh_residual_detects_non_shock():
    s = parallel_shock(2, 1.5)
    bad = ShockWave(s.left, State(s.right.rho + 0.1, s.right.v, 0, 2, 0), s.m, s.j, s.c, s.lax_type)
    assert rh_residual(bad) >= 1e-3


def test_slow_none_transition_at_a_squared_equal_rho_plus():
    rho_plus = 1.5
    lo, hi = 1.0, 2.0  # None below, Slow above
    assert parallel_shock(lo, rho_plus).lax_type is not LaxType.SLOW
    assert parallel_shock(hi, rho_plus).lax_type is LaxType.SLOW
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if parallel_shock(mid, rho_plus).lax_type is LaxType.SLOW:
            hi = mid
        else:
            lo = mid
    assert hi == pytest.approx(math.sqrt(rho_plus), abs=1e-9)


def test_fast_branch_non_parallel():
    s = shock(0.8, 1.5, 0.01, branch="fast")
    assert s.lax_type is LaxType.FAST
    assert rh_residual(s) <= 1e-10
    assert s.a ** 2 / s.m < s.right.v < s.left.v


def test_no_slow_parallel_shock_when_fast():
    with pytest.raises(NoShockError):
        shock(0.8, 1.5, 0.0)


def test_slow_shock_above_parallel_lax_boundary_for_nonzero_c():
    # with c != 0 the root stays below v- = a, so a slow shock exists for rho+ > a^2
    s = shock(0.8, 1.2, 0.01)
    assert s.lax_type is LaxType.SLOW
    assert rh_residual(s) <= 1e-10
    assert s.left.v < 0.8
