import math

import pytest

from loewner_range.ode import IntegrationError, dopri5


def test_exponential_decay():
    (y,), _ = dopri5(lambda t, s: (-s[0],), 0.0, 2.0, (1.0,), tol=1e-12)
    assert y == pytest.approx(math.exp(-2.0), abs=1e-11)


def test_harmonic_oscillator_full_period():
    rhs = lambda t, s: (s[1], -s[0])
    (x, v), _ = dopri5(rhs, 0.0, 2 * math.pi, (1.0, 0.0), tol=1e-11)
    assert x == pytest.approx(1.0, abs=1e-9)
    assert v == pytest.approx(0.0, abs=1e-9)


def test_backward_integration_inverts_forward():
    rhs = lambda t, s: (math.sin(t) * s[0],)
    (y1,), _ = dopri5(rhs, 0.0, 1.5, (2.0,), tol=1e-12)
    (y0,), _ = dopri5(rhs, 1.5, 0.0, (y1,), tol=1e-12)
    assert y0 == pytest.approx(2.0, abs=1e-10)


def test_record_starts_and_ends_at_bounds():
    _, samples = dopri5(lambda t, s: (1.0,), 0.0, 1.0, (0.0,), record=True)
    assert samples[0] == (0.0, (0.0,))
    assert samples[-1][0] == 1.0
    ts = [t for t, _ in samples]
    assert ts == sorted(ts)


def test_zero_span_returns_initial_state():
    y, samples = dopri5(lambda t, s: (1.0,), 0.3, 0.3, (5.0,), record=True)
    assert y == (5.0,)
    assert samples == [(0.3, (5.0,))]


def test_check_hook_aborts():
    class Stop(Exception):
        pass

    def check(t, s):
        if s[0] > 0.5:
            raise Stop

    with pytest.raises(Stop):
        dopri5(lambda t, s: (1.0,), 0.0, 1.0, (0.0,), check=check)


def test_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        dopri5(lambda t, s: (1.0,), 0.0, 1.0, (0.0,), tol=0.0)


def test_blowup_raises():
    with pytest.raises(IntegrationError):
        dopri5(lambda t, s: (s[0] ** 2,), 0.0, 2.0, (1.0,), tol=1e-10)
