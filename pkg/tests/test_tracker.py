import math

import numpy as np
import pytest

from mhdshock.errors import ConvergenceError, LeftHalfPlaneError
from mhdshock.lopatinski import critical_density, delta_on_axis
from mhdshock.shock import parallel_shock, shock
from mhdshock.tracker import (
    CriticalPoint,
    conjugate_residual,
    find_root,
    solve_critical_point,
    trace_critical_curve,
    trace_instability,
    verify_theorem1,
)


@pytest.fixture(scope="module")
def cp_plus():
    return solve_critical_point(2.0, 0.005)


@pytest.fixture(scope="module")
def cp_minus():
    return solve_critical_point(2.0, -0.005)


def test_find_root_axis_constrained_at_corner_zero():
    r = find_root(parallel_shock(2, 1.2), 1.0, 0.01 + 0j, axis_constrained=True)
    assert abs(r.lam) <= 1e-8
    assert r.residual <= 1e-10


def test_find_root_fixed_point(cp_plus):
    s = shock(2, cp_plus.R, 0.005)
    r = find_root(s, 1.0, 1j * cp_plus.gamma, axis_constrained=True)
    assert r.iterations <= 1
    assert r.lam.imag == pytest.approx(cp_plus.gamma, abs=1e-8)


def test_find_root_recovers_critical_frequency(cp_plus):
    s = shock(2, cp_plus.R, 0.005)
    up = find_root(s, 1.0, 1e-3j, axis_constrained=True)
    assert up.lam.imag == pytest.approx(cp_plus.gamma, abs=1e-7)
    down = find_root(s, -1.0, -1e-3j, axis_constrained=True)
    assert down.lam.imag == pytest.approx(-cp_plus.gamma, abs=1e-7)


def test_find_root_reports_left_half_plane():
    # below a0 at fixed rho_plus the zero moves into Re lambda < 0
    with pytest.raises(LeftHalfPlaneError):
        find_root(shock(1.95, critical_density(2.0)), 1.0, 1e-3)


@pytest.mark.parametrize("a", [1.5, 2.0, 3.0])
def test_critical_point_c0_closed_form(a):
    p = solve_critical_point(a, 0.0)
    assert p.R == pytest.approx(critical_density(a), abs=1e-8)
    assert abs(p.gamma) <= 1e-8
    assert p.residual <= 1e-8


def test_a_equal_one_has_no_slow_parallel_shock():
    # m v+ = 1 = a^2 downstream for every rho_plus: the state is characteristic
    assert critical_density(1.0) == 1.5
    assert parallel_shock(1.0, 1.5).lax_type.value == "none"


def test_critical_point_parity(cp_plus, cp_minus):
    assert abs(cp_plus.R - cp_minus.R) <= 1e-8
    assert abs(cp_plus.gamma + cp_minus.gamma) <= 1e-8
    assert abs(cp_plus.gamma) > 10 * cp_plus.residual
    assert cp_plus.R == pytest.approx(1.1996255906451, abs=1e-9)


def test_critical_point_residual_is_axis_sigma(cp_plus):
    dv = delta_on_axis(shock(2, cp_plus.R, 0.005), cp_plus.gamma, 1.0)
    assert dv.sigma_min <= 1e-8
    assert cp_plus.residual == pytest.approx(dv.sigma_min, rel=1e-6, abs=1e-14)


def test_conjugate_pairing(cp_plus):
    assert conjugate_residual(cp_plus) <= 1e-8


def test_critical_point_rejects_spurious_far_root():
    with pytest.raises(ConvergenceError):
        solve_critical_point(1.0, 0.005)


def test_trace_c0_matches_closed_form():
    tr = trace_critical_curve(0.0, 1.5, 3.0, 7)
    assert [p.a for p in tr] == pytest.approx(list(np.linspace(1.5, 3.0, 7)))
    for p in tr:
        assert p.R == pytest.approx(critical_density(p.a), abs=1e-8)
        assert abs(p.gamma) <= 1e-8
    assert tr.boundary is None and tr.stopped_at is None


def test_trace_parity():
    plus = trace_critical_curve(0.005, 1.5, 3.0, 6)
    minus = trace_critical_curve(-0.005, 1.5, 3.0, 6)
    assert len(plus) == len(minus) == 6
    for p, q in zip(plus, minus):
        assert abs(p.R - q.R) <= 1e-7
        assert abs(p.gamma + q.gamma) <= 1e-7


def test_trace_minimal_grid():
    tr = trace_critical_curve(0.0, 2.0, 2.5, 2)
    assert [p.a for p in tr] == [2.0, 2.5]


def test_trace_skips_infeasible_low_edge():
    tr = trace_critical_curve(0.0, 1.0, 2.0, 6)
    assert tr[0].a > 1.0
    assert tr.boundary is not None and tr.boundary < tr[0].a
    for p in tr:
        assert p.R == pytest.approx(critical_density(p.a), abs=1e-8)


def test_trace_argument_checks():
    with pytest.raises(ValueError):
        trace_critical_curve(0.0, 0.0, 2.0, 5)
    with pytest.raises(ValueError):
        trace_critical_curve(0.0, 1.5, 2.0, 1)


def test_instability_c0():
    tr = trace_instability(2.0, 0.0, xi_values=[0.0, 0.01, 0.02, 0.05])
    assert abs(tr[0].alpha) <= 1e-8 and abs(tr[0].beta) <= 1e-6
    alphas = [p.alpha for p in tr[1:]]
    assert all(x > 0 for x in alphas)
    assert alphas == sorted(alphas)
    assert alphas[0] == pytest.approx(0.0013677, rel=1e-3)
    for p in tr:
        assert p.residual <= 1e-8
        assert p.rho_plus == pytest.approx(1.2, abs=1e-8)


def test_instability_start_matches_critical_frequency(cp_plus):
    tr = trace_instability(2.0, 0.005, xi_values=[0.0], critical=cp_plus)
    assert abs(tr[0].alpha) <= 1e-8
    assert abs(tr[0].beta - cp_plus.gamma) <= 1e-6


def test_instability_branch_regularity():
    tr = trace_instability(2.0, 0.0, xi_max=0.04, steps=5)
    xs = np.array([p.xi for p in tr])
    al = np.array([p.alpha for p in tr])
    slopes = np.abs(np.diff(al) / np.diff(xs))
    dx = np.diff(xs)
    for k in range(1, len(dx)):
        assert abs(al[k + 1] - al[k]) < 10 * dx[k] * slopes[k - 1]


def test_instability_tolerance_halving():
    a = trace_instability(2.0, 0.0, xi_values=[0.0, 0.02])[-1].alpha
    b = trace_instability(2.0, 0.0, xi_values=[0.0, 0.02], tol=5e-11)[-1].alpha
    assert a == pytest.approx(b, rel=1e-6)


def test_instability_argument_checks():
    with pytest.raises(ValueError):
        trace_instability(2.0, 0.0, xi_max=0.0, steps=3)
    with pytest.raises(ValueError):
        trace_instability(2.0, 0.0, xi_values=[-0.1, 0.0])


def test_verify_theorem1_rows():
    rows = verify_theorem1([0.9, 1.0, 3.0])
    assert [r.status for r in rows[:2]] == ["noshock", "noshock"]
    assert rows[0].rho_formula == pytest.approx(2.81 / 1.81)
    assert rows[1].rho_formula == 1.5
    assert rows[2].rho_formula == pytest.approx(1.1, abs=1e-15)
    assert rows[2].status == "ok" and rows[2].gap <= 1e-6


def test_theorem1_formula_decreases():
    grid = np.linspace(1.5, 10, 12)
    rf = [r.rho_formula for r in verify_theorem1(grid[:1])] + [critical_density(a) for a in grid[1:]]
    assert all(np.diff(rf) < 0) and rf[-1] > 1
