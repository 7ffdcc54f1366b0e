"""One-dimensional transcendental solves used by the boundary construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, RootFindingError

E_M2 = math.exp(-2.0)
E_M4 = math.exp(-4.0)
ROOT_XTOL = 1e-12
NUDGE = 1e-14
SCAN_POINTS = 100_000


def regime_threshold(T: float) -> float:
    """Value of c^2 at which the two Y0 equations share the root e^-2."""
    return T - (1.0 - E_M4) / 4.0


@dataclass(frozen=True)
class RegimeParams:
    T: float
    c: float

    def __post_init__(self):
        if not 0.0 < self.T < 0.25:
            raise DomainError(f"T={self.T} outside 0 < T < 1/4")
        if not self.c > 0.0:
            raise DomainError(f"c={self.c} must be positive")

    @property
    def threshold(self) -> float:
        return regime_threshold(self.T)

    @property
    def saturated(self) -> bool:
        """True when c^2 >= T - (1 - e^-4)/4 (regime covered by the boundary construction)."""
        return self.c * self.c >= self.threshold


@dataclass(frozen=True)
class SwitchRoots:
    p0: float
    p1: Optional[float] = None
    p2: Optional[float] = None
    # every refined sign change found on (c, p0), for diagnostics
    all_roots: tuple = field(default=())

    @property
    def count(self) -> int:
        return len(self.all_roots)


def bracket_root(f: Callable[[float], float], lo: float, hi: float,
                 tol: float = ROOT_XTOL) -> float:
    """Root of ``f`` on ``[lo, hi]`` given a sign change, to width ``tol``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not (math.isfinite(flo) and math.isfinite(fhi)) or flo * fhi > 0.0:
        raise RootFindingError(
            f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    return brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=1000)


def arc_top_residual(Y: float, T: float, c: float) -> float:
    return 2.0 * c * c * math.log(Y) + Y * Y - (1.0 - 4.0 * T)


def arc_top_residual_low(Y: float, T: float, c: float) -> float:
    L = math.log(Y)
    return 2.0 * c * c * L / (1.0 + L) ** 2 + Y * Y - (1.0 - 4.0 * T)


def arc_bound_f1(Y: float, T: float) -> float:
    """(1 - 4T - Y^2) / (2 log Y): the p^2 delivering the D(T) point at Y."""
    return (1.0 - 4.0 * T - Y * Y) / (2.0 * math.log(Y))


def arc_bound_f2(Y: float, T: float) -> float:
    """f1 * (1 + log Y)^2: the squared final driver value (X - p)^2."""
    return arc_bound_f1(Y, T) * (1.0 + math.log(Y)) ** 2


def solve_Y0(rp: RegimeParams) -> float:
    """Top of the unrestricted-boundary arc that stays admissible under c."""
    T, c = rp.T, rp.c
    ylow = math.sqrt(1.0 - 4.0 * T)
    if rp.saturated:
        return bracket_root(lambda Y: arc_top_residual(Y, T, c),
                            ylow + NUDGE, 1.0 - NUDGE)
    # at the threshold the root is e^-2 itself; widen so rounding keeps a sign change
    return bracket_root(lambda Y: arc_top_residual_low(Y, T, c),
                        ylow + NUDGE, E_M2 * (1.0 + 1e-8))


def solve_p0(rp: RegimeParams) -> float:
    """Largest offset p: the initial -c segment then fills all of [0, T]."""
    A = 4.0 * rp.T + rp.c * rp.c - 1.0
    root = math.hypot(A, 2.0 * rp.c)
    # (root + A)/2 loses digits when A < 0; use the conjugate form
    p0sq = 0.5 * (root + A) if A >= 0.0 else 2.0 * rp.c * rp.c / (root - A)
    return math.sqrt(p0sq)


def t1_residual(p: float, T: float, c: float) -> float:
    """p^2 - c^2/p^2 - c^2 + 1 - 4T: zero when the -c segment ends at T."""
    return p * p - c * c / (p * p) - c * c + 1.0 - 4.0 * T


def switch_residual(p, T: float, c: float):
    """h(p) = -4pc + (c/p)^2 e^{-4c/p} - p^2 - (1 - 4T - c^2).

    ``h(p) > 0`` exactly when the driver ``-c, x - p`` would exceed ``+c``
    before time T.
    """
    p = np.asarray(p, dtype=float)
    out = -4.0 * p * c + (c / p) ** 2 * np.exp(-4.0 * c / p) - p * p - (1.0 - 4.0 * T - c * c)
    return out if out.ndim else float(out)


def _sign_change_brackets(f, grid):
    vals = f(grid)
    sgn = np.sign(vals)
    brackets = []
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        brackets.append((grid[i], grid[i + 1]))
    for i in np.nonzero(sgn == 0)[0]:
        if 0 < i < len(grid) - 1:
            brackets.append((grid[i], grid[i]))
    return brackets


def solve_switch_roots(rp: RegimeParams, p0: Optional[float] = None,
                       n_scan: int = SCAN_POINTS) -> SwitchRoots:
    """Roots of ``h`` on ``(c, p0)``; returns p1 < p2 when there are two."""
    T, c = rp.T, rp.c
    if p0 is None:
        p0 = solve_p0(rp)
    if p0 <= c:
        return SwitchRoots(p0)
    f = lambda p: switch_residual(p, T, c)
    grid = np.linspace(c, p0, n_scan)[1:-1]
    coarse = _sign_change_brackets(f, grid)
    roots: List[float] = []
    for lo, hi in coarse:
        if lo == hi:
            roots.append(float(lo))
            continue
        # one refinement pass at 10x density inside the coarse cell
        fine = np.linspace(lo, hi, 11)
        for a, b in _sign_change_brackets(f, fine) or [(lo, hi)]:
            roots.append(a if a == b else bracket_root(f, a, b))
    roots.sort()
    if len(roots) > 2:
        raise RootFindingError(
            f"switch equation has {len(roots)} sign changes on (c, p0): {roots}")
    if len(roots) == 2:
        return SwitchRoots(p0, roots[0], roots[1], tuple(roots))
    return SwitchRoots(p0, None, None, tuple(roots))


def angle_residual(C: float, phi: float, T: float) -> float:
    s = math.sin(phi)
    cc = math.cos(phi) ** 2
    lhs = 2.0 * cc * math.log(1.0 - s) + (1.0 - s) ** 2
    return 2.0 * cc * math.log(C) + C * C * (1.0 - 4.0 * T) - lhs


def solve_C0(phi: float, T: float) -> float:
    """Unique positive root C of the parametric-boundary equation at angle phi."""
    if not -math.pi / 2 < phi < math.pi / 2:
        raise DomainError(f"phi={phi} outside (-pi/2, pi/2)")
    if not 0.0 < T <= 0.25:
        raise DomainError(f"T={T} outside (0, 1/4]")
    s = math.sin(phi)
    cc = math.cos(phi) ** 2
    lhs = 2.0 * cc * math.log(1.0 - s) + (1.0 - s) ** 2
    k = 1.0 - 4.0 * T
    if k == 0.0:
        return math.exp(lhs / (2.0 * cc))

    # increasing in u = log C
    def g(u):
        return 2.0 * cc * u + math.exp(2.0 * u) * k - lhs

    u0 = math.log(1.0 - s)
    lo, hi = u0 - 1.0, u0 + 1.0
    for _ in range(200):
        if g(lo) < 0.0:
            break
        lo -= 2.0 * (u0 - lo + 1.0)
    for _ in range(200):
        if g(hi) > 0.0:
            break
        hi += 1.0
    if not (g(lo) < 0.0 < g(hi)):
        raise RootFindingError(
            f"no bracket for C0 at phi={phi}, T={T}: g({lo})={g(lo)}, g({hi})={g(hi)}")
    return math.exp(brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))
