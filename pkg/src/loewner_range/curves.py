"""Boundary curves of the value range D_c(T) and their assembly.

Right-half curves come first; the left half is always the mirror image
``X -> -X``. The closed boundary runs counterclockwise from the bottom
point ``(0, sqrt(1 - 4T))``::

    L1 -> L3 -> L2 -> L4 -> L1'                    (case 2)
    L1 -> L5 -> L7 -> L9 -> L2 -> L10 -> L8 -> L6 -> L1'   (case 1)

where ``L1'`` is the mirrored half of L1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .dynamics import check_horizon, constant_driver_endpoint
from .errors import DomainError, RootFindingError, StitchingError
from .roots import (RegimeParams, bracket_root, solve_C0, solve_p0,
                    solve_switch_roots, solve_Y0)

N_PER_CURVE = 256
FLATNESS = 1e-7
STITCH_TOL = 1e-6
MAX_DEPTH = 40

MIRROR_ID = {"L1": "L1", "L2": "L2", "L3": "L4", "L4": "L3", "L5": "L6",
             "L6": "L5", "L7": "L8", "L8": "L7", "L9": "L10", "L10": "L9",
             "UNRESTRICTED": "UNRESTRICTED", "THM1": "THM1"}


@dataclass(frozen=True)
class BoundaryPoint:
    X: float
    Y: float
    param: float


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled curve; ``params`` is strictly monotone along the samples."""
    id: str
    params: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    mirrored: bool = False

    @property
    def param_range(self) -> Tuple[float, float]:
        return float(self.params[0]), float(self.params[-1])

    @property
    def points(self) -> List[BoundaryPoint]:
        return [BoundaryPoint(float(x), float(y), float(q))
                for x, y, q in zip(self.X, self.Y, self.params)]

    @property
    def xy(self) -> np.ndarray:
        return np.column_stack([self.X, self.Y])

    @property
    def start(self) -> np.ndarray:
        return np.array([self.X[0], self.Y[0]])

    @property
    def end(self) -> np.ndarray:
        return np.array([self.X[-1], self.Y[-1]])

    def __len__(self):
        return len(self.params)

    def mirror(self) -> "BoundaryCurve":
        """Reflection in the imaginary axis, traversed in reverse."""
        return BoundaryCurve(MIRROR_ID[self.id], self.params[::-1].copy(),
                             -self.X[::-1], self.Y[::-1].copy(), not self.mirrored)


def _adaptive(point: Callable, lo: float, hi: float, n: int,
              flatness: float, max_chord: Optional[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Sample ``point(param, guess) -> complex`` on [lo, hi].

    Starts from ``n`` uniform parameters and bisects any interval whose
    midpoint deviates from the chord by more than ``flatness`` or whose
    chord is longer than ``max_chord``.
    """
    params = list(np.linspace(lo, hi, max(n, 2)))
    zs = []
    for q in params:
        zs.append(point(q, zs[-1] if zs else None))
    if max_chord is None:
        xs = [z.real for z in zs]
        ys = [z.imag for z in zs]
        diag = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
        max_chord = diag / 64 if diag > 0 else math.inf
    pending = list(range(len(params) - 1))
    depth = 0
    while pending and depth < MAX_DEPTH:
        depth += 1
        inserts = []
        for i in pending:
            qa, qb = params[i], params[i + 1]
            za, zb = zs[i], zs[i + 1]
            qm = 0.5 * (qa + qb)
            if not qa < qm < qb:
                continue
            zm = point(qm, 0.5 * (za + zb))
            chord = abs(zb - za)
            if chord > 0:
                dev = abs(((zm - za) * (zb - za).conjugate()).imag) / chord
            else:
                dev = abs(zm - za)
            if dev > flatness or chord > max_chord:
                inserts.append((i, qm, zm))
        if not inserts:
            break
        new_params, new_zs, new_pending = [], [], []
        k = 0
        for i in range(len(params)):
            new_params.append(params[i])
            new_zs.append(zs[i])
            if k < len(inserts) and inserts[k][0] == i:
                _, qm, zm = inserts[k]
                new_pending.extend([len(new_params) - 1, len(new_params)])
                new_params.append(qm)
                new_zs.append(zm)
                k += 1
        params, zs, pending = new_params, new_zs, new_pending
    z = np.array(zs)
    return np.array(params), z


def _curve(cid, point, lo, hi, n, flatness, max_chord) -> BoundaryCurve:
    q, z = _adaptive(point, lo, hi, n, flatness, max_chord)
    return BoundaryCurve(cid, q, z.real.copy(), z.imag.copy())


# -- unrestricted boundary ---------------------------------------------------

def unrestricted_x(Y, T: float):
    """Right-half X on the boundary of D(T) at height Y: 2X^2 = log Y (1 - 4T - Y^2)."""
    Y = np.asarray(Y, dtype=float)
    val = np.log(Y) * (1.0 - 4.0 * T - Y * Y) / 2.0
    out = np.sqrt(np.maximum(val, 0.0))
    return out if out.ndim else float(out)


def oval_residual(X, Y, T: float):
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return 2.0 * X * X - np.log(Y) * (1.0 - 4.0 * T - Y * Y)


def unrestricted_boundary(T: float, n: int = N_PER_CURVE, flatness: float = FLATNESS,
                          max_chord: Optional[float] = None) -> BoundaryCurve:
    """Right half of the boundary of D(T), bottom to top."""
    T = check_horizon(T)
    if n < 2:
        raise DomainError("n must be at least 2")
    lo = math.sqrt(1.0 - 4.0 * T)
    point = lambda Y, _g: complex(unrestricted_x(Y, T), Y)
    return _curve("UNRESTRICTED", point, lo, 1.0, n, flatness, max_chord)


def unrestricted_polygon(T: float, **kw) -> np.ndarray:
    """Closed counterclockwise vertex loop of D(T) (first vertex not repeated)."""
    right = unrestricted_boundary(T, **kw)
    left = right.mirror()
    return np.vstack([right.xy, left.xy[1:-1]])


def theorem1_point(phi: float, T: float) -> BoundaryPoint:
    """Point of the boundary of D(T) from the angle parametrisation."""
    C = solve_C0(phi, T)
    s = math.sin(phi)
    x = (C * C * (4.0 * T - 1.0) + (1.0 - s) ** 2) / (2.0 * C * math.cos(phi))
    return BoundaryPoint(x, (1.0 - s) / C, phi)


# -- bounded-driver curves ----------------------------------------------------

def _require_saturated(rp: RegimeParams):
    if not rp.saturated:
        raise DomainError(
            f"c^2={rp.c ** 2:.6g} below T - (1 - e^-4)/4 = {rp.threshold:.6g}; "
            "boundary construction needs c^2 >= that threshold")


def curve_l1(T: float, c: float, n: int = N_PER_CURVE, flatness: float = FLATNESS,
             max_chord: Optional[float] = None) -> BoundaryCurve:
    """Arc of the unrestricted boundary reachable with |lam| <= c (right half)."""
    rp = RegimeParams(check_horizon(T), c)
    _require_saturated(rp)
    Y0 = solve_Y0(rp)
    lo = math.sqrt(1.0 - 4.0 * T)
    point = lambda Y, _g: complex(unrestricted_x(Y, T), Y)
    return _curve("L1", point, lo, Y0, n, flatness, max_chord)


def l3_point(p: float, T: float, c: float) -> complex:
    """Endpoint of the driver ``-c`` then ``x - p`` (no upper saturation)."""
    target = 1.0 - 4.0 * T - c * c

    def F(Y):
        return 2.0 * p * p * math.log(Y * p / c) + Y * Y - p * p - target

    hi = c / p
    if F(hi) <= 0.0:
        # t1 = T up to rounding: the whole driver is -c
        Y = hi
    else:
        lo = 0.5 * hi
        while F(lo) > 0.0:
            lo *= 0.5
            if lo < 1e-300:
                raise RootFindingError(f"no Y bracket for p={p}")
        Y = bracket_root(F, lo, hi, tol=1e-16)
    X = -c + p * (1.0 - math.log(Y * p / c))
    return complex(X, Y)


def switched_residual(X: float, Y: float, p: float, T: float, c: float) -> Tuple[float, float]:
    L = math.log(Y * p / c)
    return (2.0 * p * p * L + Y * Y - p * p - (1.0 - 4.0 * T - c * c),
            X - (-c + p * (1.0 - L)))


def curve_l3(T: float, c: float, p_lo: float, p_hi: float, n: int = N_PER_CURVE,
             curve_id: str = "L3", flatness: float = FLATNESS,
             max_chord: Optional[float] = None) -> BoundaryCurve:
    """Curve swept by the two-segment driver for p in [p_lo, p_hi].

    Serves as L3 (p in [c, p0]), L5 (p in [c, p1]) and L9 (p in [p2, p0]).
    """
    rp = RegimeParams(check_horizon(T), c)
    p0 = solve_p0(rp)
    slack = 1e-12 * max(1.0, p0)
    if not (c - slack <= p_lo <= p_hi <= p0 + slack):
        raise DomainError(f"need c <= p_lo <= p_hi <= p0, got [{p_lo}, {p_hi}], p0={p0}")
    point = lambda p, _g: l3_point(p, T, c)
    return _curve(curve_id, point, p_lo, p_hi, n, flatness, max_chord)


def l7_point(p: float, T: float, c: float) -> complex:
    """Endpoint of the three-segment driver ``-c``, ``x - p``, ``+c``."""
    k = c * math.exp(-2.0 * c / p)
    m = c * c - 1.0 + 4.0 * T - 4.0 * c * p
    root = math.hypot(m, 2.0 * k)
    u = math.sqrt(0.5 * (m + root)) if m >= 0.0 else k * math.sqrt(2.0 / (root - m))
    return complex(c + u, k / u)


def saturated_residual(X: float, Y: float, p: float, T: float, c: float) -> Tuple[float, float]:
    return (4.0 * c * p + (X - c) ** 2 - Y * Y - 4.0 * T - (c * c - 1.0),
            -p * math.log((X - c) * Y / c) - 2.0 * c)


def curve_l7(T: float, c: float, p1: float, p2: float, n: int = N_PER_CURVE,
             flatness: float = FLATNESS, max_chord: Optional[float] = None) -> BoundaryCurve:
    """Curve of the saturating three-segment drivers, p in [p1, p2]."""
    check_horizon(T)
    if not (c > 0 and c <= p1 < p2):
        raise DomainError(f"need c <= p1 < p2, got c={c}, p1={p1}, p2={p2}")
    point = lambda p, _g: l7_point(p, T, c)
    return _curve("L7", point, p1, p2, n, flatness, max_chord)


def two_pole_residual(z: complex, mu: float, T: float, c: float) -> complex:
    s = c * (2.0 * mu - 1.0)
    return (z * z + 1.0 - 2.0 * s * (z - 1j)
            + 8.0 * mu * c * c * (mu - 1.0) * (cmath.log(z + s) - cmath.log(1j + s))
            - 4.0 * T)


def two_pole_closed_form(T: float, c: float, a: float) -> complex:
    """``g(i, T)`` for the constant driver ``a = -c`` or ``+c``."""
    e = constant_driver_endpoint(a, T)
    return complex(e.x, e.y)


def l2_point(mu: float, T: float, c: float, guess: Optional[complex] = None,
             tol: float = 1e-14, max_iter: int = 100) -> complex:
    """Solve the two-pole endpoint equation for z with damped Newton.

    Both ``z + s`` and ``i + s`` lie in the upper half-plane, so the
    difference of principal logarithms is the continuous branch as long as
    the iterate stays there; steps leaving it are damped.
    """
    if guess is None:
        guess = two_pole_closed_form(T, c, -c if mu < 0.5 else c)
    s = c * (2.0 * mu - 1.0)
    w = 8.0 * mu * c * c * (mu - 1.0)
    z = complex(guess)
    f = two_pole_residual(z, mu, T, c)
    for _ in range(max_iter):
        df = 2.0 * z - 2.0 * s + w / (z + s)
        step = f / df
        lam = 1.0
        while True:
            zn = z - lam * step
            if zn.imag > 0.0:
                fn = two_pole_residual(zn, mu, T, c)
                if abs(fn) < abs(f) or abs(fn) < 1e-15:
                    break
            lam *= 0.5
            if lam < 1e-12:
                if abs(f) < 1e-12:
                    # residual at roundoff level
                    return z
                raise RootFindingError(f"Newton stalled at mu={mu}, z={z}, |F|={abs(f)}")
        z, f = zn, fn
        if abs(lam * step) <= tol * max(1.0, abs(z)) or abs(f) < 1e-15:
            return z
    raise RootFindingError(f"Newton did not converge at mu={mu} (|F|={abs(f)})")


def curve_l2(T: float, c: float, n: int = N_PER_CURVE, flatness: float = FLATNESS,
             max_chord: Optional[float] = None) -> BoundaryCurve:
    """Top curve from simultaneous driving at -c and +c, mu from 0 to 1."""
    check_horizon(T)
    if not c > 0:
        raise DomainError("c must be positive")
    z0 = two_pole_closed_form(T, c, -c)

    def point(mu, guess):
        return l2_point(mu, T, c, z0 if guess is None else guess)

    return _curve("L2", point, 0.0, 1.0, n, flatness, max_chord)


# -- assembly ------------------------------------------------------------------

def lambda_final(p: float, T: float, c: float) -> float:
    """Final driver value ``X - p`` of the two-segment driver."""
    z = l3_point(p, T, c)
    return z.real - p


def decide_case(T: float, c: float) -> Tuple[int, Dict]:
    """Case 1 (upper saturation occurs) or case 2, with diagnostics."""
    rp = RegimeParams(check_horizon(T), c)
    p0 = solve_p0(rp)
    roots = solve_switch_roots(rp, p0)
    meta = {"p0": p0, "switch_roots": roots.all_roots}
    if roots.p1 is not None:
        pm = 0.5 * (roots.p1 + roots.p2)
        excess = lambda_final(pm, T, c) - c
        meta["midpoint_excess"] = excess
        if excess > 0.0:
            meta.update(p1=roots.p1, p2=roots.p2)
            return 1, meta
        meta["note"] = "two roots but no constraint violation between them"
    elif roots.count == 1:
        meta["note"] = f"single root {roots.all_roots[0]!r}; constraint not violated"
    return 2, meta


@dataclass(frozen=True)
class ValueRangeBoundary:
    T: float
    c: float
    case_tag: int
    curves: Tuple[BoundaryCurve, ...]
    polygon: np.ndarray
    meta: Dict = field(default_factory=dict)

    @property
    def Y0(self) -> float:
        return self.meta["Y0"]

    @property
    def p0(self) -> float:
        return self.meta["p0"]

    @property
    def p1(self) -> Optional[float]:
        return self.meta.get("p1")

    @property
    def p2(self) -> Optional[float]:
        return self.meta.get("p2")


def assemble_boundary(T: float, c: float, n_per_curve: int = N_PER_CURVE,
                      flatness: float = FLATNESS,
                      stitch_tol: float = STITCH_TOL) -> ValueRangeBoundary:
    """Closed counterclockwise boundary of D_c(T) starting at the bottom point."""
    rp = RegimeParams(check_horizon(T), c)
    _require_saturated(rp)
    Y0 = solve_Y0(rp)
    case, meta = decide_case(T, c)
    meta["Y0"] = Y0
    p0 = meta["p0"]
    kw = dict(n=n_per_curve, flatness=flatness)
    right = [curve_l1(T, c, **kw)]
    if case == 1:
        p1, p2 = meta["p1"], meta["p2"]
        right += [curve_l3(T, c, c, p1, curve_id="L5", **kw),
                  curve_l7(T, c, p1, p2, **kw),
                  curve_l3(T, c, p2, p0, curve_id="L9", **kw)]
    else:
        right.append(curve_l3(T, c, c, p0, **kw))
    top = curve_l2(T, c, **kw)
    curves = right + [top] + [cv.mirror() for cv in reversed(right)]

    gaps = []
    for a, b in zip(curves, curves[1:] + curves[:1]):
        gap = float(np.hypot(*(a.end - b.start)))
        gaps.append(gap)
        if gap > stitch_tol:
            raise StitchingError(
                f"gap {gap:.3e} between {a.id} end and {b.id} start exceeds {stitch_tol}")
    meta["max_gap"] = max(gaps)
    poly = np.vstack([curves[0].xy] + [cv.xy[1:] for cv in curves[1:]])[:-1]
    return ValueRangeBoundary(T, c, case, tuple(curves), poly, meta)
