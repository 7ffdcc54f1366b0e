"""Phase and adjoint dynamics of the chordal Loewner equation started at i.

With ``g(i, t) = x + iy`` the Loewner flow splits into::

    x' =  2(x - lam) / ((x - lam)^2 + y^2)
    y' = -2y         / ((x - lam)^2 + y^2)

from ``(x, y) = (0, 1)``. Drivers are piecewise: constant segments are
integrated numerically, extremal-follow segments (``lam = x - p``) use
their exact solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, RootFindingError, ScheduleError, SwallowError
from .ode import dopri5

Y_FLOOR = 1e-12
QUARTER = 0.25


@dataclass(frozen=True)
class PhaseState:
    x: float
    y: float
    t: float = 0.0

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class AdjointState:
    psi1: float
    psi2: float

    def __post_init__(self):
        if self.psi1 == 0.0 and self.psi2 == 0.0:
            raise DomainError("adjoint vector must be nonzero")


@dataclass(frozen=True)
class ConstantDriver:
    a: float


@dataclass(frozen=True)
class ExtremalFollow:
    """lam(t) = x(t) - p along the running trajectory."""
    p: float


DriverKind = Union[ConstantDriver, ExtremalFollow]


@dataclass(frozen=True)
class Horizon:
    T: float

    def __post_init__(self):
        check_horizon(self.T)


def check_horizon(T: float) -> float:
    T = float(T)
    if not (0.0 < T < QUARTER):
        raise DomainError(
            f"horizon T={T!r} outside the bounded regime 0 < T < 1/4")
    return T


@dataclass(frozen=True)
class DrivingFunction:
    """Piecewise schedule of driver segments on [0, T].

    ``segments`` is an ordered tuple of ``(end_time, kind)``; segment k runs
    from the previous end time (0 for the first) to ``end_time``.
    """
    segments: Tuple[Tuple[float, DriverKind], ...]
    c: float = math.inf

    def __post_init__(self):
        segs = tuple((float(e), k) for e, k in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ScheduleError("empty schedule")
        if self.c < 0:
            raise ScheduleError("driver bound c must be non-negative")
        prev = 0.0
        for end, kind in segs:
            if not end > prev:
                raise ScheduleError(
                    f"segment end times must increase strictly (got {end} after {prev})")
            if isinstance(kind, ConstantDriver):
                if abs(kind.a) > self.c * (1 + 1e-14):
                    raise ScheduleError(f"|a|={abs(kind.a)} exceeds bound c={self.c}")
            elif not isinstance(kind, ExtremalFollow):
                raise ScheduleError(f"unknown segment kind {kind!r}")
            prev = end

    @classmethod
    def constant(cls, a: float, T: float, c: Optional[float] = None) -> "DrivingFunction":
        return cls(((T, ConstantDriver(a)),), c=abs(a) if c is None else c)

    @property
    def horizon(self) -> float:
        return self.segments[-1][0]

    @property
    def switch_times(self) -> List[float]:
        return [e for e, _ in self.segments[:-1]]

    def kind_at(self, t: float) -> DriverKind:
        for end, kind in self.segments:
            if t <= end:
                return kind
        return self.segments[-1][1]

    def value(self, t: float, x: float) -> float:
        """Driver value at time t for the phase coordinate x at that time."""
        kind = self.kind_at(t)
        if isinstance(kind, ConstantDriver):
            return kind.a
        return x - kind.p

    def mirrored(self) -> "DrivingFunction":
        """Schedule of -lam(t); its trajectory is the reflection x -> -x."""
        segs = []
        for end, kind in self.segments:
            if isinstance(kind, ConstantDriver):
                segs.append((end, ConstantDriver(-kind.a)))
            else:
                segs.append((end, ExtremalFollow(-kind.p)))
        return DrivingFunction(tuple(segs), c=self.c)


def phase_rhs(a: float):
    def rhs(t, s):
        u = s[0] - a
        d = u * u + s[1] * s[1]
        return (2.0 * u / d, -2.0 * s[1] / d)
    return rhs


def _y_guard(t, s):
    if s[1] < Y_FLOOR:
        raise SwallowError(f"y fell below {Y_FLOOR} at t={t}")


def follow_step(x0: float, y0: float, p: float, dt: float) -> Tuple[float, float]:
    """Exact extremal-follow flow over ``dt`` from ``(x0, y0)``.

    With ``x - lam = p`` fixed, y solves
    ``2p^2 log(y/y0) + y^2 - y0^2 = -4 dt`` and ``x = x0 - p log(y/y0)``.
    """
    if dt == 0.0:
        return x0, y0
    if p == 0.0:
        y2 = y0 * y0 - 4.0 * dt
        if y2 < Y_FLOOR ** 2:
            raise SwallowError(f"y reaches 0 within dt={dt}")
        return x0, math.sqrt(y2)
    pp = 2.0 * p * p

    def g(y):
        return pp * math.log(y / y0) + y * y - y0 * y0 + 4.0 * dt

    hi = y0
    lo = 0.5 * y0
    while g(lo) > 0.0:
        lo *= 0.5
        if lo < Y_FLOOR:
            raise SwallowError(f"y falls below {Y_FLOOR} within dt={dt}")
    y = brentq(g, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    return x0 - p * math.log(y / y0), y


def _follow_samples(x0, y0, t0, p, t1, n=64):
    out = []
    for t in np.linspace(t0, t1, n)[1:]:
        x, y = follow_step(x0, y0, p, t - t0)
        out.append((float(t), (x, y)))
    return out


def _run(driver: DrivingFunction, T: float, tol: float, record: bool):
    if not math.isclose(driver.horizon, T, rel_tol=0.0, abs_tol=1e-12):
        raise ScheduleError(f"schedule ends at {driver.horizon}, horizon is {T}")
    state = (0.0, 1.0)
    t = 0.0
    samples = [(0.0, state)] if record else []
    for end, kind in driver.segments:
        if isinstance(kind, ConstantDriver):
            state, seg = dopri5(phase_rhs(kind.a), t, end, state, tol=tol,
                                record=record, check=_y_guard)
            samples.extend(seg[1:])
        else:
            if record:
                samples.extend(_follow_samples(state[0], state[1], t, kind.p, end))
            state = follow_step(state[0], state[1], kind.p, end - t)
        t = end
    return PhaseState(state[0], state[1], t), samples


def integrate_phase(driver: DrivingFunction, T: float, tol: float = 1e-10) -> PhaseState:
    """Endpoint ``g(i, T)`` for the given driver, as a PhaseState."""
    T = check_horizon(T)
    return _run(driver, T, tol, record=False)[0]


def phase_trajectory(driver: DrivingFunction, T: float, tol: float = 1e-10) -> np.ndarray:
    """Trajectory samples as an array of rows ``(t, x, y)``."""
    T = check_horizon(T)
    _, samples = _run(driver, T, tol, record=True)
    return np.array([(t, s[0], s[1]) for t, s in samples])


def constant_driver_flow(x0: float, y0: float, a: float, dt: float) -> Tuple[float, float]:
    """Exact flow under a constant driver ``a`` for time ``dt``.

    Uses the two invariants ``(x - a) y`` and ``(x - a)^2 - y^2 - 4t``.
    """
    u0 = x0 - a
    if u0 == 0.0:
        y2 = y0 * y0 - 4.0 * dt
        if y2 <= 0.0:
            raise SwallowError(f"y reaches 0 within dt={dt}")
        return a, math.sqrt(y2)
    k = u0 * y0
    m = u0 * u0 - y0 * y0 + 4.0 * dt
    root = math.hypot(m, 2.0 * k)
    # avoid cancellation in (m + root) when m < 0
    # k * k can underflow, so scale |k| outside the root
    u = math.sqrt(0.5 * (m + root)) if m >= 0.0 else abs(k) * math.sqrt(2.0 / (root - m))
    u = math.copysign(u, u0)
    return a + u, k / u


def constant_driver_endpoint(a: float, t: float) -> PhaseState:
    """Closed-form ``g(i, t)`` for ``lam == a``."""
    if t < 0:
        raise DomainError("t must be non-negative")
    if a == 0.0 and t >= QUARTER:
        raise SwallowError("lam == 0 swallows i at t = 1/4")
    x, y = constant_driver_flow(0.0, 1.0, a, t)
    if not y > 0.0:
        raise SwallowError(f"no positive-y solution for a={a}, t={t}")
    return PhaseState(x, y, t)


def hamiltonian(s: PhaseState, adj: AdjointState, lam: float) -> float:
    u = s.x - lam
    d = u * u + s.y * s.y
    if d == 0.0:
        raise DomainError("degenerate Hamiltonian denominator")
    return (2.0 * u * adj.psi1 - 2.0 * s.y * adj.psi2) / d


def lambda_star(s: PhaseState, adj: AdjointState) -> float:
    """Unique maximiser of the Hamiltonian over the real line."""
    den = math.hypot(adj.psi1, adj.psi2) - adj.psi2
    if den <= 0.0:
        raise DomainError("psi1 = 0 with psi2 > 0: no interior maximiser")
    return s.x - s.y * adj.psi1 / den


def adjoint_rhs(x, y, psi1, psi2, lam):
    u = x - lam
    d = u * u + y * y
    f = 2.0 / (d * d)
    q = u * u - y * y
    return (f * (q * psi1 - 2.0 * u * y * psi2),
            f * (2.0 * u * y * psi1 + q * psi2))


def _offset(y, psi1, psi2):
    return y * psi1 / (math.hypot(psi1, psi2) - psi2)


@dataclass(frozen=True)
class HamiltonianTrajectory:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray
    lam: np.ndarray
    H: np.ndarray
    p: np.ndarray

    @property
    def end(self) -> PhaseState:
        return PhaseState(float(self.x[-1]), float(self.y[-1]), float(self.t[-1]))


def integrate_full_hamiltonian(adj0: AdjointState, T: float,
                               tol: float = 1e-10) -> HamiltonianTrajectory:
    """Integrate state and costate with the unconstrained maximiser as control.

    Reports the running offset ``p(t)`` and ``H(t)``; both are first
    integrals of this flow.
    """
    T = check_horizon(T)
    lambda_star(PhaseState(0.0, 1.0), adj0)

    def rhs(t, s):
        x, y, p1, p2 = s
        den = math.hypot(p1, p2) - p2
        if den <= 0.0:
            raise DomainError(f"adjoint degeneracy at t={t}")
        lam = x - y * p1 / den
        u = x - lam
        d = u * u + y * y
        return (2.0 * u / d, -2.0 * y / d) + adjoint_rhs(x, y, p1, p2, lam)

    _, samples = dopri5(rhs, 0.0, T, (0.0, 1.0, adj0.psi1, adj0.psi2),
                        tol=tol, record=True, check=lambda t, s: _y_guard(t, s))
    arr = np.array([s for _, s in samples])
    t = np.array([t for t, _ in samples])
    x, y, p1, p2 = arr.T
    den = np.hypot(p1, p2) - p2
    p = y * p1 / den
    lam = x - p
    H = den / y
    return HamiltonianTrajectory(t, x, y, p1, p2, lam, H, p)


def conserved_drift(trajectory: np.ndarray, a: float) -> Tuple[float, float]:
    """Max deviation of ``(x-a)y`` and ``(x-a)^2 - y^2 - 4t`` along rows (t, x, y)."""
    traj = np.asarray(trajectory, dtype=float)
    t, x, y = traj[:, 0], traj[:, 1], traj[:, 2]
    u = x - a
    q1 = u * y
    q2 = u * u - y * y - 4.0 * t
    return float(np.max(np.abs(q1 - q1[0]))), float(np.max(np.abs(q2 - q2[0])))


def switch_time_t1(p: float, c: float) -> float:
    """End of the initial ``-c`` segment for extremal offset p."""
    return 0.25 * (p * p - c * c / (p * p) - c * c + 1.0)


def extremal_schedule(p: float, c: float, T: float) -> DrivingFunction:
    """Driver ``-c`` on [0, t1], ``x - p`` on [t1, t2], ``+c`` on [t2, T].

    ``t2`` is the time at which ``x - p`` reaches ``c``; when that happens
    after T the last segment is absent.
    """
    from .roots import RegimeParams, solve_p0

    T = check_horizon(T)
    if not c > 0:
        raise DomainError("c must be positive")
    p0 = solve_p0(RegimeParams(T, c))
    slack = 1e-12 * max(1.0, p0)
    if p < c - slack or p > p0 + slack:
        raise DomainError(f"p={p} outside [c, p0] = [{c}, {p0}]")
    p = min(max(p, c), p0)
    t1 = max(switch_time_t1(p, c), 0.0)
    if t1 > T + 1e-12:
        raise DomainError(f"t1={t1} exceeds T={T}")
    segs: List[Tuple[float, DriverKind]] = []
    if t1 >= T - 1e-15:
        return DrivingFunction(((T, ConstantDriver(-c)),), c=c)
    if t1 > 0.0:
        segs.append((t1, ConstantDriver(-c)))
    y1 = c / p
    y_hit = y1 * math.exp(-2.0 * c / p)
    t2 = t1 + 0.25 * (4.0 * p * c + y1 * y1 - y_hit * y_hit)
    if t2 < T:
        segs.append((t2, ExtremalFollow(p)))
        segs.append((T, ConstantDriver(c)))
    else:
        segs.append((T, ExtremalFollow(p)))
    return DrivingFunction(tuple(segs), c=c)


def two_pole_rhs(mu: float, c: float):
    """Real form of ``z' = 2 mu / (z - c) + 2 (1 - mu) / (z + c)``."""
    def rhs(t, s):
        z = complex(s[0], s[1])
        w = 2.0 * mu / (z - c) + 2.0 * (1.0 - mu) / (z + c)
        return (w.real, w.imag)
    return rhs


def integrate_two_pole(mu: float, c: float, T: float, tol: float = 1e-10) -> PhaseState:
    """Endpoint of the generalised two-pole flow with weight mu on ``+c``."""
    T = check_horizon(T)
    if not 0.0 <= mu <= 1.0:
        raise DomainError("mu must lie in [0, 1]")
    (x, y), _ = dopri5(two_pole_rhs(mu, c), 0.0, T, (0.0, 1.0), tol=tol, check=_y_guard)
    return PhaseState(x, y, T)


def driver_values(driver: DrivingFunction, trajectory: np.ndarray) -> np.ndarray:
    """Evaluate lam(t) along trajectory rows (t, x, y)."""
    return np.array([driver.value(t, x) for t, x, _ in np.asarray(trajectory)])


__all__: Sequence[str] = (
    "PhaseState", "AdjointState", "ConstantDriver", "ExtremalFollow",
    "DrivingFunction", "Horizon", "check_horizon", "integrate_phase",
    "phase_trajectory", "constant_driver_flow", "constant_driver_endpoint",
    "hamiltonian", "lambda_star", "integrate_full_hamiltonian",
    "HamiltonianTrajectory", "conserved_drift", "extremal_schedule",
    "switch_time_t1", "follow_step", "integrate_two_pole", "driver_values",
)
