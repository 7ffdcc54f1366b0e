import math

import numpy as np
import pytest
from scipy.spatial.distance import directed_hausdorff
from shapely.geometry import Point, Polygon

from loewner_range.curves import (
    FLATNESS, assemble_boundary, curve_l1, curve_l2, curve_l3, curve_l7, decide_case,
    oval_residual, two_pole_residual, switched_residual, saturated_residual, l2_point, l3_point,
    l7_point, lambda_final, theorem1_point, two_pole_closed_form, unrestricted_boundary,
    unrestricted_polygon, unrestricted_x)
from loewner_range.dynamics import constant_driver_endpoint
from loewner_range.errors import DomainError
from loewner_range.roots import RegimeParams, solve_p0, solve_Y0

SCENARIOS = [(0.245, 1.0), (0.245, 0.1), (0.247, 0.05)]


@pytest.fixture(scope="module")
def boundaries():
    return {tc: assemble_boundary(*tc) for tc in SCENARIOS}


# -- unrestricted boundary -------------------------------------------------------

def test_unrestricted_x_reference():
    # 2X^2 = log(0.5) (0.02 - 0.25)
    X = unrestricted_x(0.5, 0.245)
    assert X == pytest.approx(math.sqrt(math.log(0.5) * -0.23 / 2), abs=1e-15)
    assert X == pytest.approx(0.282333, abs=1e-6)
    p = -X / math.log(0.5)
    assert abs(2 * p * p * math.log(0.5) + 0.25 - 0.02) < 1e-10


def test_unrestricted_endpoints():
    cv = unrestricted_boundary(0.245)
    assert cv.Y[0] == pytest.approx(math.sqrt(0.02), abs=1e-15)
    assert cv.Y[-1] == 1.0
    assert cv.X[0] == pytest.approx(0.0, abs=1e-7)
    assert cv.X[-1] == 0.0
    assert np.all(np.diff(cv.params) > 0)
    assert np.max(np.abs(oval_residual(cv.X, cv.Y, 0.245))) < 1e-12


def test_unrestricted_polygon_closed_oval():
    poly = unrestricted_polygon(0.245)
    shape = Polygon(poly)
    assert shape.is_valid
    assert shape.exterior.is_ccw
    assert shape.contains(Point(0.0, 0.5))
    assert not shape.contains(Point(0.0, 1.01))


def test_unrestricted_requires_valid_horizon():
    with pytest.raises(DomainError):
        unrestricted_boundary(0.25)


def test_adaptive_refinement_respects_flatness():
    T = 0.2
    cv = unrestricted_boundary(T, n=16)
    a, b = cv.xy[:-1], cv.xy[1:]
    ym = 0.5 * (cv.params[:-1] + cv.params[1:])
    m = np.column_stack([unrestricted_x(ym, T), ym])
    d = b - a
    cross = np.abs(d[:, 0] * (m - a)[:, 1] - d[:, 1] * (m - a)[:, 0])
    dev = cross / np.hypot(d[:, 0], d[:, 1])
    assert np.max(dev) <= FLATNESS


# -- angle parametrisation cross-check ----------------------------------------------

@pytest.mark.parametrize("T", [0.05, 0.2, 0.245])
def test_angle_points_satisfy_oval_relation(T):
    for phi in np.linspace(-1.5, 1.5, 61):
        pt = theorem1_point(float(phi), T)
        assert pt.Y > 0
        assert abs(oval_residual(pt.X, pt.Y, T)) < 1e-8


def test_angle_limits():
    T = 0.2
    bottom = theorem1_point(-math.pi / 2 + 1e-7, T)
    top = theorem1_point(math.pi / 2 - 1e-7, T)
    assert (top.X, top.Y) == pytest.approx((0.0, 1.0), abs=1e-3)
    assert (bottom.X, bottom.Y) == pytest.approx((0.0, math.sqrt(1 - 4 * T)), abs=1e-3)


def test_angle_zero():
    from loewner_range.roots import solve_C0
    C = solve_C0(0.0, 0.2)
    pt = theorem1_point(0.0, 0.2)
    assert pt.Y == pytest.approx(1 / C, abs=1e-15)
    assert pt.X * 2 * C == pytest.approx(C * C * (0.8 - 1) + 1, abs=1e-13)


# -- L1 ----------------------------------------------------------------------------

@pytest.mark.parametrize("T,c", SCENARIOS)
def test_l1_admissibility(T, c):
    cv = curve_l1(T, c)
    Y0 = solve_Y0(RegimeParams(T, c))
    assert cv.Y[-1] == pytest.approx(Y0, abs=1e-15)
    assert np.max(np.abs(oval_residual(cv.X, cv.Y, T))) < 1e-9
    inner = cv.Y < 1.0
    p = -cv.X[inner] / np.log(cv.Y[inner])
    assert np.all(p >= -1e-12) and np.all(p <= c + 1e-9)
    assert np.all(cv.X[inner] - p <= c + 1e-9)


def test_l1_rejects_unsaturated():
    with pytest.raises(DomainError):
        curve_l1(0.247, 0.01)


# -- L3 / L5 / L9 ------------------------------------------------------------------

def test_l3_at_p_equal_c_meets_l1():
    T, c = 0.245, 1.0
    z = l3_point(c, T, c)
    Y0 = solve_Y0(RegimeParams(T, c))
    assert z.imag == pytest.approx(Y0, abs=1e-12)
    assert z.real == pytest.approx(-c * math.log(Y0), abs=1e-12)
    assert z.real == pytest.approx(unrestricted_x(Y0, T), abs=1e-9)


@pytest.mark.parametrize("T,c", SCENARIOS)
def test_l3_at_p0_is_constant_driver_endpoint(T, c):
    p0 = solve_p0(RegimeParams(T, c))
    z = l3_point(p0, T, c)
    e = constant_driver_endpoint(-c, T)
    assert (z.real, z.imag) == pytest.approx((e.x, e.y), abs=1e-9)


@pytest.mark.parametrize("T,c", SCENARIOS)
def test_l3_residuals(T, c):
    p0 = solve_p0(RegimeParams(T, c))
    cv = curve_l3(T, c, c, p0)
    for pt in cv.points:
        r1, r2 = switched_residual(pt.X, pt.Y, pt.param, T, c)
        assert abs(r1) < 1e-9 and abs(r2) < 1e-9


def test_l3_range_validation():
    with pytest.raises(DomainError):
        curve_l3(0.245, 1.0, 0.5, 1.2)
    with pytest.raises(DomainError):
        curve_l3(0.245, 1.0, 1.0, 2.0)


# -- L7 ----------------------------------------------------------------------------

def test_l7_residuals_and_stitching():
    T, c = 0.247, 0.05
    b = assemble_boundary(T, c)
    cv = curve_l7(T, c, b.p1, b.p2)
    for pt in cv.points:
        r1, r2 = saturated_residual(pt.X, pt.Y, pt.param, T, c)
        assert abs(r1) < 1e-9 and abs(r2) < 1e-9
    for p in (b.p1, b.p2):
        assert abs(l7_point(p, T, c) - l3_point(p, T, c)) < 1e-7


# -- L2 ----------------------------------------------------------------------------

@pytest.mark.parametrize("T,c", SCENARIOS)
def test_l2_endpoints_and_symmetry(T, c):
    cv = curve_l2(T, c)
    left = two_pole_closed_form(T, c, -c)
    right = two_pole_closed_form(T, c, c)
    assert abs(complex(cv.X[0], cv.Y[0]) - left) < 1e-12
    assert abs(complex(cv.X[-1], cv.Y[-1]) - right) < 1e-9
    # closed form (z + c)^2 = 4T + c^2 - 1 + 2ci at mu = 0
    assert abs((left + c) ** 2 - (4 * T + c * c - 1 + 2j * c)) < 1e-12
    half = l2_point(0.5, T, c)
    assert abs(half.real) < 1e-9
    for pt in cv.points:
        assert abs(two_pole_residual(complex(pt.X, pt.Y), pt.param, T, c)) < 1e-8


def test_l2_mirror_pairs():
    T, c = 0.245, 1.0
    for mu in (0.1, 0.3, 0.45):
        a = l2_point(mu, T, c)
        b = l2_point(1 - mu, T, c)
        assert a.real == pytest.approx(-b.real, abs=1e-10)
        assert a.imag == pytest.approx(b.imag, abs=1e-10)


def test_l2_half_solves_axis_equation():
    # at mu = 1/2: z^2 + 1 - 2c^2 log(z / i) = 4T with z = iY
    T, c = 0.245, 1.0
    Y = l2_point(0.5, T, c).imag
    assert -Y * Y + 1 - 2 * c * c * math.log(Y) == pytest.approx(4 * T, abs=1e-12)


# -- case decision and assembly ---------------------------------------------------

def lambda_scan_case(T, c, n=4000):
    """Independent case oracle: does the two-segment driver end above +c anywhere?"""
    p0 = solve_p0(RegimeParams(T, c))
    ps = np.linspace(c, p0, n)[1:-1]
    return 1 if max(lambda_final(float(p), T, c) - c for p in ps) > 0 else 2


@pytest.mark.parametrize("T,c", SCENARIOS)
def test_case_matches_scan(T, c):
    case, meta = decide_case(T, c)
    assert case == lambda_scan_case(T, c)


def test_case_tags(boundaries):
    assert boundaries[(0.245, 1.0)].case_tag == 2
    assert boundaries[(0.245, 0.1)].case_tag == 2
    crescent = boundaries[(0.247, 0.05)]
    assert crescent.case_tag == 1
    assert [cv.id for cv in crescent.curves] == [
        "L1", "L5", "L7", "L9", "L2", "L10", "L8", "L6", "L1"]
    assert [cv.id for cv in boundaries[(0.245, 1.0)].curves] == ["L1", "L3", "L2", "L4", "L1"]


@pytest.mark.parametrize("tc", SCENARIOS)
def test_polygon_closed_simple_symmetric(boundaries, tc):
    b = boundaries[tc]
    assert b.meta["max_gap"] < 1e-6
    poly = b.polygon
    assert poly[0] == pytest.approx([0.0, math.sqrt(1 - 4 * tc[0])], abs=1e-7)
    shape = Polygon(poly)
    assert shape.is_valid and shape.exterior.is_ccw
    mirrored = Polygon(poly * [-1, 1])
    assert shape.symmetric_difference(mirrored).area < 1e-9
    d1 = directed_hausdorff(poly, poly * [-1, 1])[0]
    assert d1 < 1e-6
    y_top = l2_point(0.5, *tc).imag
    assert shape.contains(Point(0.0, 0.5 * (y_top + math.sqrt(1 - 4 * tc[0]))))


@pytest.mark.parametrize("tc", SCENARIOS)
def test_subset_of_unrestricted(boundaries, tc):
    outer = Polygon(unrestricted_polygon(tc[0])).buffer(1e-6)
    assert all(outer.contains(Point(*v)) for v in boundaries[tc].polygon)


def test_nesting_in_c():
    T = 0.245
    polys = [Polygon(assemble_boundary(T, c).polygon) for c in (0.1, 0.5, 1.0, 2.0)]
    for small, big in zip(polys, polys[1:]):
        grown = big.buffer(1e-6)
        assert all(grown.contains(Point(v)) for v in small.exterior.coords)


@pytest.mark.parametrize("c", [5.0, 10.0, 30.0])
def test_large_c_approaches_unrestricted(c):
    # the gap sits at the top, where 1 - Y0 ~ 2T / (c^2 + 1)
    T = 0.2
    b = assemble_boundary(T, c)
    outer = unrestricted_polygon(T, n=2048)
    h = max(directed_hausdorff(b.polygon, outer)[0], directed_hausdorff(outer, b.polygon)[0])
    assert h < 1.1 * 2 * T / (c * c + 1) + 1e-4
    if c >= 30:
        assert h < 1e-3


def test_assemble_rejects_unsaturated():
    with pytest.raises(DomainError):
        assemble_boundary(0.247, 0.01)
