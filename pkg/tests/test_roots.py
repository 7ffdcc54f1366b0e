import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loewner_range.dynamics import (ConstantDriver, DrivingFunction, ExtremalFollow,
                                    integrate_phase, switch_time_t1)
from loewner_range.errors import DomainError, RootFindingError
from loewner_range.roots import (
    E_M2, RegimeParams, bracket_root, arc_top_residual, arc_top_residual_low, regime_threshold,
    solve_C0, solve_p0, solve_switch_roots, solve_Y0, switch_residual, t1_residual,
    angle_residual)


def grid_roots(f, lo, hi, n=1_000_000):
    """Sign changes of a vectorised f on a uniform grid, located by linear interpolation."""
    x = np.linspace(lo, hi, n)
    v = f(x)
    idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    return [x[i] - v[i] * (x[i + 1] - x[i]) / (v[i + 1] - v[i]) for i in idx]


# -- RegimeParams ----------------------------------------------------------------

def test_regime_params_validation():
    with pytest.raises(DomainError):
        RegimeParams(0.25, 1.0)
    with pytest.raises(DomainError):
        RegimeParams(0.2, 0.0)
    rp = RegimeParams(0.247, 0.05)
    assert rp.threshold == pytest.approx(0.247 - (1 - math.exp(-4)) / 4, abs=1e-16)
    assert rp.saturated
    assert not RegimeParams(0.247, 0.01).saturated


# -- bracket_root ----------------------------------------------------------------

def test_bracket_root_sqrt():
    r = bracket_root(lambda y: y * y - 0.02, 0.0, 1.0)
    assert r == pytest.approx(0.1414214, abs=1e-7)
    assert r == pytest.approx(math.sqrt(0.02), abs=1e-12)


def test_bracket_root_endpoint_zero():
    assert bracket_root(lambda y: y - 1.0, 0.0, 1.0) == 1.0


def test_bracket_root_no_sign_change():
    with pytest.raises(RootFindingError):
        bracket_root(lambda y: y * y + 1.0, -1.0, 1.0)
    with pytest.raises(RootFindingError):
        bracket_root(lambda y: math.nan, 0.0, 1.0)


# -- solve_Y0 --------------------------------------------------------------------

def test_Y0_at_threshold_is_e_minus_2():
    T = 0.247
    c = math.sqrt(regime_threshold(T))
    Y0 = solve_Y0(RegimeParams(T, c))
    assert Y0 == pytest.approx(E_M2, abs=1e-10)
    assert Y0 == pytest.approx(0.1353353, abs=1e-7)


def test_Y0_matches_grid_oracle():
    T, c = 0.245, 1.0
    oracle = grid_roots(lambda y: 2 * c * c * np.log(y) + y * y - (1 - 4 * T),
                        math.sqrt(1 - 4 * T) + 1e-9, 1 - 1e-9)
    assert len(oracle) == 1
    Y0 = solve_Y0(RegimeParams(T, c))
    assert Y0 == pytest.approx(oracle[0], abs=1e-10)
    assert abs(arc_top_residual(Y0, T, c)) < 1e-10


def test_Y0_large_c():
    assert solve_Y0(RegimeParams(0.2, 100.0)) > 0.999


def test_Y0_below_threshold_uses_second_branch():
    T, c = 0.247, 0.02
    rp = RegimeParams(T, c)
    assert not rp.saturated
    Y0 = solve_Y0(rp)
    assert math.sqrt(1 - 4 * T) < Y0 < E_M2
    assert abs(arc_top_residual_low(Y0, T, c)) < 1e-12


def test_Y0_continuous_across_threshold():
    T = 0.247
    c_star = math.sqrt(regime_threshold(T))
    below = solve_Y0(RegimeParams(T, c_star * (1 - 1e-9)))
    above = solve_Y0(RegimeParams(T, c_star * (1 + 1e-9)))
    assert abs(below - above) < 1e-7


@pytest.mark.parametrize("T,c", [(0.1, 0.3), (0.245, 0.1), (0.2, 2.0)])
def test_arc_top_residual_strictly_increasing(T, c):
    y = np.linspace(math.sqrt(1 - 4 * T) + 1e-6, 1 - 1e-6, 10_000)
    v = np.array([arc_top_residual(float(t), T, c) for t in y])
    assert np.all(np.diff(v) > 0)
    assert v[0] < 0 < v[-1]


# -- solve_p0 --------------------------------------------------------------------

def test_p0_reference_value():
    p0 = solve_p0(RegimeParams(0.245, 1.0))
    assert p0 == pytest.approx(math.sqrt((math.sqrt(0.9604 + 4) + 0.98) / 2), abs=1e-15)
    assert p0 == pytest.approx(1.2663324101460403, abs=1e-14)
    assert abs(t1_residual(p0, 0.245, 1.0)) < 1e-12


def test_p0_matches_mpmath_root():
    mpmath.mp.dps = 40
    T, c = mpmath.mpf("0.245"), mpmath.mpf(1)
    root = mpmath.findroot(lambda p: p * p - c * c / (p * p) - c * c + 1 - 4 * T, 1.3)
    assert solve_p0(RegimeParams(0.245, 1.0)) == pytest.approx(float(root), abs=1e-14)


def test_p0_matches_bracketed_switch_time_equation():
    T, c = 0.23, 0.4
    ref = bracket_root(lambda p: t1_residual(p, T, c), c, 10.0)
    assert solve_p0(RegimeParams(T, c)) == pytest.approx(ref, abs=1e-10)


def test_p0_small_c_limit():
    # for 4T < 1 the offset vanishes like c / sqrt(1 - 4T)
    c = 1e-6
    p0 = solve_p0(RegimeParams(0.2, c))
    assert p0 * p0 / (c * c) == pytest.approx(1 / 0.2, rel=1e-9)
    assert abs(t1_residual(p0, 0.2, c)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(T=st.floats(1e-3, 0.2499), c=st.floats(1e-3, 50.0))
def test_p0_identity(T, c):
    p0 = solve_p0(RegimeParams(T, c))
    assert p0 > c
    assert abs(t1_residual(p0, T, c)) < 1e-12 * max(1.0, c * c, p0 * p0)
    assert switch_time_t1(p0, c) == pytest.approx(T, abs=1e-12 * max(1.0, c * c))


# -- solve_switch_roots ----------------------------------------------------------

def _lambda_end(p, T, c):
    t1 = switch_time_t1(p, c)
    segs = ((t1, ConstantDriver(-c)), (T, ExtremalFollow(p))) if t1 > 0 else (
        (T, ExtremalFollow(p)),)
    e = integrate_phase(DrivingFunction(segs), T, tol=1e-12)
    return e.x - p


@pytest.mark.parametrize("T,c", [(0.245, 1.0), (0.245, 0.1), (0.247, 0.05), (0.2, 0.3)])
def test_switch_roots_match_grid_scan(T, c):
    rp = RegimeParams(T, c)
    p0 = solve_p0(rp)
    oracle = grid_roots(lambda p: switch_residual(p, T, c), c, p0)[:]
    roots = solve_switch_roots(rp, p0)
    assert roots.count == len(oracle)
    for r, o in zip(roots.all_roots, oracle):
        assert r == pytest.approx(o, abs=1e-9)
        assert abs(switch_residual(r, T, c)) < 1e-10


def test_switch_roots_crescent_two_roots():
    T, c = 0.247, 0.05
    roots = solve_switch_roots(RegimeParams(T, c))
    assert roots.p1 is not None and roots.p2 is not None
    assert c <= roots.p1 < roots.p2 <= roots.p0
    assert roots.p1 == pytest.approx(0.0615265, abs=1e-7)
    assert roots.p2 == pytest.approx(0.0809831, abs=1e-7)
    for p in (roots.p1, roots.p2):
        assert _lambda_end(p, T, c) == pytest.approx(c, abs=1e-8)
    # between the roots the two-segment driver overshoots +c
    assert _lambda_end(0.5 * (roots.p1 + roots.p2), T, c) > c


def test_switch_residual_sign_at_ends():
    # h(c) <= 0 and h(p0) < 0 for every admissible pair
    rng = np.random.default_rng(0)
    for _ in range(200):
        T = rng.uniform(0.01, 0.2499)
        c = rng.uniform(0.01, 3.0)
        p0 = solve_p0(RegimeParams(T, c))
        assert switch_residual(c, T, c) <= 1e-12
        assert switch_residual(p0, T, c) < 0


def test_switch_residual_vectorised():
    p = np.array([1.1, 1.2])
    v = switch_residual(p, 0.245, 1.0)
    assert v.shape == (2,)
    assert v[0] == switch_residual(1.1, 0.245, 1.0)


# -- solve_C0 --------------------------------------------------------------------

@pytest.mark.parametrize("phi", [-1.4, -0.7, 0.0, 0.3, 1.2])
@pytest.mark.parametrize("T", [0.05, 0.2, 0.245])
def test_C0_matches_grid_oracle(phi, T):
    s, cc = math.sin(phi), math.cos(phi) ** 2
    lhs = 2 * cc * math.log(1 - s) + (1 - s) ** 2
    oracle = grid_roots(lambda C: 2 * cc * np.log(C) + C * C * (1 - 4 * T) - lhs, 1e-6, 50.0)
    assert len(oracle) == 1
    C = solve_C0(phi, T)
    assert C == pytest.approx(oracle[0], rel=1e-6)
    assert abs(angle_residual(C, phi, T)) < 1e-12


def test_C0_quarter_closed_form():
    phi = 0.4
    s, cc = math.sin(phi), math.cos(phi) ** 2
    expected = math.exp((2 * cc * math.log(1 - s) + (1 - s) ** 2) / (2 * cc))
    assert solve_C0(phi, 0.25) == pytest.approx(expected, rel=1e-15)


def test_C0_at_zero_angle():
    # phi = 0: 2 log C + C^2 (1 - 4T) = 1
    C = solve_C0(0.0, 0.2)
    assert 2 * math.log(C) + 0.2 * C * C == pytest.approx(1.0, abs=1e-13)


def test_C0_domain():
    with pytest.raises(DomainError):
        solve_C0(math.pi / 2, 0.2)
    with pytest.raises(DomainError):
        solve_C0(0.0, 0.3)
