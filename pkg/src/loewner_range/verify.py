"""Independent checks of an assembled boundary.

Random piecewise-constant drivers must land inside it, extremal drivers
must land on it, and the synthesised drivers must maximise the
Hamiltonian over [-c, c].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .curves import ValueRangeBoundary, assemble_boundary
from .dynamics import (AdjointState, ConstantDriver, DrivingFunction, ExtremalFollow,
                       PhaseState, check_horizon, constant_driver_endpoint,
                       extremal_schedule, hamiltonian, integrate_phase,
                       integrate_two_pole, lambda_star, phase_rhs, adjoint_rhs)
from .errors import DomainError, SwallowError
from .ode import dopri5

INSIDE, ON_BOUNDARY, OUTSIDE = "inside", "on_boundary", "outside"
_CODES = {0: INSIDE, 1: ON_BOUNDARY, 2: OUTSIDE}
BAND = 1e-3


@dataclass(frozen=True)
class DriverSampler:
    """Random piecewise-constant drivers with ``n_switches`` segments.

    Segment values are i.i.d. uniform on [-c, c] (or all equal to
    ``fixed_value``); interior switch times are sorted uniforms on [0, T].
    """
    c: float
    T: float
    n_switches: int = 2
    fixed_value: Optional[float] = None

    def __post_init__(self):
        check_horizon(self.T)
        if self.c < 0 or self.n_switches < 1:
            raise DomainError("need c >= 0 and n_switches >= 1")
        if self.fixed_value is not None and abs(self.fixed_value) > self.c:
            raise DomainError("fixed_value exceeds the bound c")

    def draw(self, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """One driver as (segment end times, segment values)."""
        k = self.n_switches
        ends = np.append(np.sort(rng.uniform(0.0, self.T, k - 1)), self.T)
        if self.fixed_value is None:
            vals = rng.uniform(-self.c, self.c, k)
        else:
            vals = np.full(k, float(self.fixed_value))
        return ends, vals

    def drivers(self, n: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
        """``n`` drivers; stream i is seeded by (seed, i) alone."""
        k = self.n_switches
        ends = np.empty((n, k))
        vals = np.empty((n, k))
        for i in range(n):
            ends[i], vals[i] = self.draw(np.random.default_rng([seed, i]))
        return ends, vals

    def as_driving_function(self, ends, vals) -> DrivingFunction:
        segs, prev = [], 0.0
        for e, v in zip(ends, vals):
            if e > prev:
                segs.append((float(e), ConstantDriver(float(v))))
                prev = e
        return DrivingFunction(tuple(segs), c=self.c)


def _flow_vec(x, y, a, dt):
    """Vectorised exact constant-driver flow (see constant_driver_flow)."""
    u0 = x - a
    k = u0 * y
    m = u0 * u0 - y * y + 4.0 * dt
    root = np.hypot(m, 2.0 * k)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(m >= 0.0, np.sqrt(0.5 * (m + root)),
                     np.abs(k) * np.sqrt(2.0 / (root - m)))
        u = np.copysign(u, u0)
        y_new = np.where(k == 0.0, np.sqrt(y * y - 4.0 * dt), k / u)
    x_new = np.where(k == 0.0, x, a + u)
    return x_new, y_new


def propagate_piecewise_constant(ends: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Endpoints of piecewise-constant drivers by chaining exact segment flows."""
    ends = np.atleast_2d(ends)
    vals = np.atleast_2d(vals)
    n = ends.shape[0]
    x = np.zeros(n)
    y = np.ones(n)
    prev = np.zeros(n)
    for j in range(ends.shape[1]):
        dt = ends[:, j] - prev
        x, y = _flow_vec(x, y, vals[:, j], dt)
        prev = ends[:, j]
    if not np.all(y > 0.0):
        raise SwallowError("a sampled driver swallowed i before T")
    return np.column_stack([x, y])


def sample_reachable(sampler: DriverSampler, n: int, seed: int,
                     tol: Optional[float] = None) -> np.ndarray:
    """Endpoints ``g(i, T)`` of ``n`` random admissible drivers, shape (n, 2).

    Segments are propagated with the exact constant-driver flow; pass
    ``tol`` to integrate each driver numerically instead.
    """
    if n == 0:
        return np.empty((0, 2))
    ends, vals = sampler.drivers(n, seed)
    if tol is None:
        return propagate_piecewise_constant(ends, vals)
    out = np.empty((n, 2))
    for i in range(n):
        e = integrate_phase(sampler.as_driving_function(ends[i], vals[i]), sampler.T, tol)
        out[i] = e.x, e.y
    return out


# -- polygon classification ------------------------------------------------------

def _edges(polygon: np.ndarray):
    P = np.asarray(polygon, dtype=float)
    if P.ndim != 2 or P.shape[0] < 3 or P.shape[1] != 2:
        raise DomainError("polygon needs at least three (x, y) vertices")
    Q = np.roll(P, -1, axis=0)
    return P, Q


def polygon_distance(polygon: np.ndarray, pts: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Euclidean distance from each point to the polygon's edges."""
    P, Q = _edges(polygon)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    d = Q - P
    dd = np.einsum("ij,ij->i", d, d)
    dd = np.where(dd == 0.0, 1.0, dd)
    out = np.empty(len(pts))
    for s in range(0, len(pts), chunk):
        w = pts[s:s + chunk, None, :] - P[None, :, :]
        t = np.clip(np.einsum("kij,ij->ki", w, d) / dd, 0.0, 1.0)
        r = w - t[..., None] * d
        out[s:s + chunk] = np.sqrt(np.min(np.einsum("kij,kij->ki", r, r), axis=1))
    return out


def ray_cast_inside(polygon: np.ndarray, pts: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Even-odd rule with a horizontal ray towards +x."""
    P, Q = _edges(polygon)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    out = np.empty(len(pts), dtype=bool)
    y0, y1 = P[:, 1], Q[:, 1]
    x0, x1 = P[:, 0], Q[:, 0]
    straddle_dy = np.where(y1 == y0, 1.0, y1 - y0)
    for s in range(0, len(pts), chunk):
        px = pts[s:s + chunk, 0:1]
        py = pts[s:s + chunk, 1:2]
        crosses = (y0 > py) != (y1 > py)
        xint = x0 + (py - y0) * (x1 - x0) / straddle_dy
        out[s:s + chunk] = (np.count_nonzero(crosses & (px < xint), axis=1) % 2) == 1
    return out


def classify_points(polygon: np.ndarray, pts: np.ndarray,
                    band: float = BAND) -> Tuple[np.ndarray, np.ndarray]:
    """Codes (0 inside, 1 on boundary, 2 outside) and signed distances.

    The signed distance is positive outside the polygon.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if len(pts) == 0:
        return np.empty(0, dtype=int), np.empty(0)
    dist = polygon_distance(polygon, pts)
    inside = ray_cast_inside(polygon, pts)
    codes = np.where(dist <= band, 1, np.where(inside, 0, 2))
    return codes, np.where(inside, -dist, dist)


def point_in_boundary(boundary, pt, band: float = BAND) -> str:
    """Classify one point against a ValueRangeBoundary or raw vertex loop."""
    poly = boundary.polygon if isinstance(boundary, ValueRangeBoundary) else boundary
    if isinstance(pt, PhaseState):
        pt = (pt.x, pt.y)
    codes, _ = classify_points(poly, np.array([pt], dtype=float), band)
    return _CODES[int(codes[0])]


@dataclass(frozen=True)
class SampleReport:
    n_samples: int
    n_inside: int
    n_on_boundary: int
    n_outside: int
    max_violation: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.n_outside == 0


def audit_points(polygon: np.ndarray, pts: np.ndarray, seed: int,
                 band: float = BAND) -> SampleReport:
    codes, signed = classify_points(polygon, pts, band)
    return SampleReport(
        n_samples=len(codes),
        n_inside=int(np.count_nonzero(codes == 0)),
        n_on_boundary=int(np.count_nonzero(codes == 1)),
        n_outside=int(np.count_nonzero(codes == 2)),
        max_violation=float(signed.max()) if len(signed) else 0.0,
        seed=seed,
    )


def containment_audit(T: float, c: float, n: int, seed: int, band: float = BAND,
                      n_switches: int = 2,
                      boundary: Optional[ValueRangeBoundary] = None) -> SampleReport:
    """Classify ``n`` random reachable endpoints against the assembled boundary."""
    if boundary is None:
        boundary = assemble_boundary(T, c)
    pts = sample_reachable(DriverSampler(c, T, n_switches), n, seed)
    return audit_points(boundary.polygon, pts, seed, band)


def coverage_gap(polygon: np.ndarray, pts: np.ndarray) -> float:
    """Largest distance from a boundary vertex to its nearest sample."""
    from scipy.spatial import cKDTree
    d, _ = cKDTree(pts).query(polygon)
    return float(d.max())


# -- extremal round trips --------------------------------------------------------

def curve_point_driver(curve_id: str, mirrored: bool, param: float, T: float,
                       c: float, X: float = 0.0, Y: float = 1.0):
    """Driver reproducing a boundary point, or None for the two-pole curve."""
    if curve_id == "L2":
        return None
    if curve_id == "L1":
        p = 0.0 if Y >= 1.0 else -X / math.log(Y)
        return DrivingFunction(((T, ExtremalFollow(p)),), c=c)
    driver = extremal_schedule(param, c, T)
    return driver.mirrored() if mirrored else driver


def extremal_sharpness_by_curve(T: float, c: float, m: int = 64, tol: float = 1e-11,
                                boundary: Optional[ValueRangeBoundary] = None
                                ) -> Dict[str, float]:
    """Max distance between curve samples and their re-integrated drivers."""
    if boundary is None:
        boundary = assemble_boundary(T, c)
    out: Dict[str, float] = {}
    for k, cv in enumerate(boundary.curves):
        idx = np.unique(np.linspace(0, len(cv) - 1, m).round().astype(int))
        worst = 0.0
        for i in idx:
            q, X, Y = float(cv.params[i]), float(cv.X[i]), float(cv.Y[i])
            if cv.id == "L2":
                e = integrate_two_pole(q, c, T, tol)
            else:
                e = integrate_phase(curve_point_driver(cv.id, cv.mirrored, q, T, c, X, Y), T, tol)
            worst = max(worst, math.hypot(e.x - X, e.y - Y))
        key = f"{k}:{cv.id}{'m' if cv.mirrored else ''}"
        out[key] = worst
    return out


def extremal_sharpness(T: float, c: float, m: int = 64, tol: float = 1e-11,
                       boundary: Optional[ValueRangeBoundary] = None) -> float:
    return max(extremal_sharpness_by_curve(T, c, m, tol, boundary).values())


# -- maximum-principle spot check ---------------------------------------------------

def _coupled_rhs(kind):
    def rhs(t, s):
        x, y, p1, p2 = s
        lam = kind.a if isinstance(kind, ConstantDriver) else x - kind.p
        return phase_rhs(lam)(t, (x, y)) + adjoint_rhs(x, y, p1, p2, lam)
    return rhs


def pontryagin_defects(T: float, c: float, p: float, tol: float = 1e-11):
    """Rows (t, defect) along the synthesised extremal for offset p.

    The costate is fixed at the start of the follow segment by
    ``psi1 = p`` and ``H = 1`` and propagated both ways. The defect is
    ``H(lam(t)) - max over [-c, c] of H``; it is never positive.
    """
    driver = extremal_schedule(p, c, T)
    segs = driver.segments
    if not isinstance(segs[0][1], ConstantDriver) or len(segs) < 2:
        raise DomainError("spot check needs p strictly between c and p0")
    t1 = segs[0][0]
    e1 = constant_driver_endpoint(-c, t1)
    x1, y1 = e1.x, e1.y
    s1 = (x1, y1, p, (p * p - y1 * y1) / (2.0 * y1))

    _, back = dopri5(_coupled_rhs(segs[0][1]), t1, 0.0, s1, tol=tol, record=True)
    rows = [(t, s, segs[0][1]) for t, s in reversed(back)]
    state, t = s1, t1
    for end, kind in segs[1:]:
        state, fwd = dopri5(_coupled_rhs(kind), t, end, state, tol=tol, record=True)
        rows.extend((tt, s, kind) for tt, s in fwd[1:])
        t = end

    out = []
    for tt, (x, y, p1, p2), kind in rows:
        ph, adj = PhaseState(x, y, tt), AdjointState(p1, p2)
        lam = kind.a if isinstance(kind, ConstantDriver) else x - kind.p
        cands = [hamiltonian(ph, adj, -c), hamiltonian(ph, adj, c)]
        try:
            cands.append(hamiltonian(ph, adj, min(max(lambda_star(ph, adj), -c), c)))
        except DomainError:
            pass
        out.append((tt, hamiltonian(ph, adj, lam) - max(cands)))
    return np.array(out)


def pontryagin_spot_check(T: float, c: float, p: float, tol: float = 1e-11) -> float:
    """Worst Hamiltonian defect of the schedule; >= -1e-6 passes."""
    return float(pontryagin_defects(T, c, p, tol)[:, 1].min())


def bang_bang_escape(T: float, c: float, n_tau: int = 2001,
                     boundary: Optional[ValueRangeBoundary] = None) -> Tuple[float, float]:
    """Worst signed distance of single-switch drivers ``-c -> +c`` (and mirror).

    Returns ``(distance, switch_time)``; a positive distance means an
    admissible driver lands outside the assembled boundary.
    """
    if boundary is None:
        boundary = assemble_boundary(T, c)
    taus = np.linspace(0.0, T, n_tau)
    ends = np.column_stack([taus, np.full(n_tau, T)])
    worst, where = -math.inf, 0.0
    for first in (-c, c):
        vals = np.tile([first, -first], (n_tau, 1))
        _, signed = classify_points(boundary.polygon, propagate_piecewise_constant(ends, vals), 0.0)
        i = int(np.argmax(signed))
        if signed[i] > worst:
            worst, where = float(signed[i]), float(taus[i])
    return worst, where
