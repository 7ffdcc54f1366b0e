"""Adaptive Dormand-Prince 5(4) integrator for small systems.

The state vectors here have 2 to 4 components, so the stepper works on
plain Python floats; numpy arrays of that size cost more in overhead than
they save.
"""

from __future__ import annotations

import math
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import LoewnerError

Vector = Tuple[float, ...]
RHS = Callable[[float, Sequence[float]], Sequence[float]]

_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# difference between the 5th and embedded 4th order weights
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
MAX_STEPS = 1_000_000


class IntegrationError(LoewnerError):
    """Step size underflow or step budget exhausted."""


def _axpy(y, h, coeffs, ks):
    out = list(y)
    for a, k in zip(coeffs, ks):
        if a:
            ha = h * a
            for i, ki in enumerate(k):
                out[i] += ha * ki
    return out


def dopri5(
    rhs: RHS,
    t0: float,
    t1: float,
    y0: Sequence[float],
    tol: float = 1e-10,
    record: bool = False,
    check: Optional[Callable[[float, Sequence[float]], None]] = None,
    h0: Optional[float] = None,
) -> Tuple[Vector, List[Tuple[float, Vector]]]:
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1``.

    Error per unit step: the local error of an accepted step of length h
    satisfies ``|err_i| <= tol * (1 + |y_i|) * h / |t1 - t0|`` in the RMS
    sense, so the accumulated error stays near ``tol``. Integration runs
    backward when ``t1 < t0``.

    Args:
        rhs: right-hand side, returns a sequence of len(y0).
        t0, t1: start and end times.
        y0: initial state.
        tol: absolute and relative tolerance.
        record: if True, also return every accepted (t, y) pair,
            starting with (t0, y0).
        check: called on each accepted state; raise to abort.
        h0: initial step magnitude guess.

    Returns:
        (y(t1), samples) where samples is empty unless ``record``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    y = tuple(float(v) for v in y0)
    samples: List[Tuple[float, Vector]] = [(t0, y)] if record else []
    span = t1 - t0
    if span == 0.0:
        return y, samples
    direction = 1.0 if span > 0 else -1.0
    n = len(y)

    k1 = rhs(t0, y)
    if h0 is None:
        d0 = math.sqrt(sum((yi / (tol + tol * abs(yi))) ** 2 for yi in y) / n)
        d1 = math.sqrt(sum((fi / (tol + tol * abs(yi))) ** 2
                           for fi, yi in zip(k1, y)) / n)
        h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
        h = min(h, abs(span))
    else:
        h = min(abs(h0), abs(span))
    t = t0
    steps = 0
    while direction * (t1 - t) > 0:
        steps += 1
        if steps > MAX_STEPS:
            raise IntegrationError(f"step budget exhausted at t={t}")
        last = False
        if h >= abs(t1 - t):
            h = abs(t1 - t)
            last = True
        hs = direction * h
        k2 = rhs(t + _C2 * hs, _axpy(y, hs, (_A21,), (k1,)))
        k3 = rhs(t + _C3 * hs, _axpy(y, hs, (_A31, _A32), (k1, k2)))
        k4 = rhs(t + _C4 * hs, _axpy(y, hs, (_A41, _A42, _A43), (k1, k2, k3)))
        k5 = rhs(t + _C5 * hs,
                 _axpy(y, hs, (_A51, _A52, _A53, _A54), (k1, k2, k3, k4)))
        k6 = rhs(t + hs,
                 _axpy(y, hs, (_A61, _A62, _A63, _A64, _A65), (k1, k2, k3, k4, k5)))
        y_new = _axpy(y, hs, (_B1, 0.0, _B3, _B4, _B5, _B6), (k1, k2, k3, k4, k5, k6))
        k7 = rhs(t + hs, y_new)
        acc = 0.0
        for i in range(n):
            e = hs * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i]
                      + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i])
            sc = tol + tol * max(abs(y[i]), abs(y_new[i]))
            acc += (e / sc) ** 2
        err = math.sqrt(acc / n) * abs(span) / h
        if err <= 1.0:
            t = t1 if last else t + hs
            y = tuple(y_new)
            k1 = k7
            if check is not None:
                check(t, y)
            if record:
                samples.append((t, y))
            factor = MAX_FACTOR if err == 0.0 else min(
                MAX_FACTOR, SAFETY * err ** -0.25)
            h *= factor
        else:
            h *= max(MIN_FACTOR, SAFETY * err ** -0.25)
        if h < 1e-15 * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow at t={t}")
    return y, samples
