import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from separatrix.integrate import (
    EventKind,
    InsufficientSamples,
    IntegratorConfig,
    SeriesUnavailable,
    Termination,
    cube_root_series,
    fit_cube_root,
    integrate_extended,
    integrate_riccati,
    singular_exponent_fit,
    write_trajectory,
)
from separatrix.problems import Extended, PotentialSpec, ProblemError
from separatrix.specialfn import hermite_ratio

X2 = PotentialSpec((0, 0, 1.0))
X4 = PotentialSpec((0, 0, 0, 0, 1.0))
TABLE2_EQ = Extended(3, ((1, 0, 1.0),))
TABLE3_EQ = Extended(3, ((1, 1, -1.0),))


def _rk4(f, y0, x_end, h):
    x, y = 0.0, y0
    n = int(round(x_end / h))
    for _ in range(n):
        k1 = f(x, y)
        k2 = f(x + h / 2, y + h / 2 * k1)
        k3 = f(x + h / 2, y + h / 2 * k2)
        k4 = f(x + h, y + h * k3)
        y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x += h
    return y


# -- configuration ---------------------------------------------------------------


@pytest.mark.parametrize(
    "kw,key",
    [
        ({"rtol": 0.0}, "rtol"),
        ({"h_init": 1.0}, "h_init"),
        ({"y_switch": 1.0}, "y_switch"),
        ({"jump_delta": 0.0}, "jump_delta"),
        ({"x_max": -1.0}, "x_max"),
        ({"max_singularities": -1}, "max_singularities"),
        ({"sample_spacing": 0.0}, "sample_spacing"),
    ],
)
def test_config_validation_names_key(kw, key):
    with pytest.raises(ProblemError) as exc:
        IntegratorConfig(**kw)
    assert exc.value.key == key


# -- Riccati integration -----------------------------------------------------------


def test_exact_separatrix_is_followed():
    # y = -x solves y' = -y^2 + x^2 - 1; the solution is unstable, so only the
    # window where e^{x^2} amplification of rounding stays small is checked
    t = integrate_riccati(X2, 1.0, 0.0, IntegratorConfig(x_max=4.5))
    assert np.max(np.abs(t.y + t.x)) < 1e-8
    assert t.pole_count == 0
    assert t.terminated is Termination.REACHED_X_MAX


def test_matches_fine_rk4_without_poles():
    cfg = IntegratorConfig(x_max=3.0)
    t = integrate_riccati(X2, 0.5, 0.0, cfg)
    ref = _rk4(lambda x, y: -y * y + x * x - 0.5, 0.0, 3.0, 1e-4)
    assert t.y[-1] == pytest.approx(ref, rel=1e-10)


def test_pole_location_matches_hermite_zero():
    # E = 5: y = x(8/(4x^2 - 2) - 1), a single pole at 1/sqrt(2)
    t = integrate_riccati(X2, 5.0, 0.0, IntegratorConfig(x_max=3.0))
    assert t.pole_count == 1
    assert t.events[0].kind is EventKind.SIMPLE_POLE
    assert t.events[0].x0 == pytest.approx(1 / math.sqrt(2), abs=1e-10)


def test_solution_through_two_poles_matches_exact():
    t = integrate_riccati(X2, 9.0, 0.0, IntegratorConfig(x_max=4.0))
    roots = np.roots([16, 0, -48, 0, 12])
    zeros = np.sort(roots[roots.real > 0].real)
    assert [e.x0 for e in t.events] == pytest.approx(list(zeros), abs=1e-10)
    exact = np.array([-x + 8 * hermite_ratio(4, x) for x in t.x])
    rel = np.abs(t.y - exact) / np.maximum(1.0, np.abs(exact))
    assert rel.max() < 1e-7


def test_riccati_samples_and_slope():
    cfg = IntegratorConfig(x_max=5.0, sample_spacing=0.02)
    t = integrate_riccati(X4, 3.0, 0.2, cfg, with_slope=True)
    assert np.all(np.diff(t.x) > 0)
    # gaps only exceed the spacing across a pole, where samples are not stored
    gaps = np.diff(t.x)
    assert np.sum(gaps > 0.02 + 1e-12) <= t.pole_count
    V = np.array([X4(x) for x in t.x])
    finite = np.abs(t.y) < 1e3
    assert np.allclose(t.yprime[finite], (V - 3.0 - t.y**2)[finite], rtol=1e-12, atol=1e-9)


def test_budget_exhaustion_stops_at_the_pole():
    t = integrate_riccati(X2, 9.0, 0.0, IntegratorConfig(x_max=12.0, max_singularities=1))
    assert t.terminated is Termination.SINGULAR_BUDGET_EXHAUSTED
    assert t.pole_count == 2
    assert t.x_end < 2.0


def test_capture_stops_early_with_final_count():
    cfg = IntegratorConfig(x_max=12.0)
    full = integrate_riccati(X4, 20.0, 0.0, cfg)
    cap = integrate_riccati(X4, 20.0, 0.0, cfg.with_(stop_on_capture=True))
    assert cap.terminated is Termination.CAPTURED
    assert cap.x_end < full.x_end
    assert cap.pole_count == full.pole_count


@given(st.floats(0.5, 30.0))
@settings(max_examples=20, deadline=None)
def test_pole_count_invariant_under_switch_threshold(E):
    a = integrate_riccati(X4, E, 0.0, IntegratorConfig(x_max=6.0, y_switch=1e3))
    b = integrate_riccati(X4, E, 0.0, IntegratorConfig(x_max=6.0, y_switch=1e2))
    assert a.pole_count == b.pole_count
    if a.events:
        assert [e.x0 for e in a.events] == pytest.approx([e.x0 for e in b.events], abs=1e-8)


def test_riccati_exponent_is_minus_one():
    t = integrate_riccati(X2, 6.0, 0.0, IntegratorConfig(x_max=3.0, sample_spacing=1e-3))
    assert t.pole_count == 2
    for i in range(2):
        assert singular_exponent_fit(t, i) == pytest.approx(-1.0, abs=0.02)
    with pytest.raises(IndexError):
        singular_exponent_fit(t, 5)


def test_exponent_fit_needs_samples():
    t = integrate_riccati(X2, 6.0, 0.0, IntegratorConfig(x_max=3.0, sample_spacing=0.5))
    with pytest.raises(InsufficientSamples):
        singular_exponent_fit(t, 0, y_switch=1e9)


# -- cube-root series --------------------------------------------------------------


def test_series_reduces_to_printed_expansions():
    x0, a3 = 0.7, -0.3
    sx = dict((p, c(x0, a3)) for p, c in cube_root_series(TABLE2_EQ).y_terms)
    assert sx == pytest.approx({-1: 1, 3: a3, 5: 0, 6: 3 * x0 / 10, 7: -6 * a3**2 / 11, 8: 0, 9: 3 / 26})
    sxy = dict((p, c(x0, a3)) for p, c in cube_root_series(Extended(3, ((1, 1, 1.0),))).y_terms)
    assert sxy == pytest.approx(
        {-1: 1, 3: a3, 5: x0 / 2, 6: 0, 7: -6 * a3**2 / 11, 8: 3 / 20, 9: -9 * a3 * x0 / 26}
    )


@pytest.mark.parametrize("A,B", [(1.0, 0.0), (0.0, 1.0), (0.5, -0.7)])
def test_series_solves_the_equation(A, B):
    """Residual of the truncated series in the (y, w) system is O(s^7)."""
    ser = cube_root_series(Extended(3, ((1, 0, A), (1, 1, B))))
    x0, a3 = 0.8, 0.25
    for t in (1e-3, 1e-4):
        h = t * 1e-4
        x = x0 + t
        y = ser.y(t, x0, a3)
        w = ser.w(t, x0, a3)
        dy = (ser.y(t + h, x0, a3) - ser.y(t - h, x0, a3)) / (2 * h)
        dw = (ser.w(t + h, x0, a3) - ser.w(t - h, x0, a3)) / (2 * h)
        assert dy == pytest.approx(w - y**4 / 3, rel=1e-6)
        assert dw == pytest.approx(A * x + B * x * y, abs=5 * t ** (4 / 3))


def test_series_unavailable_for_other_forcing():
    with pytest.raises(SeriesUnavailable):
        cube_root_series(Extended(3, ((2, 0, 1.0),)))
    with pytest.raises(SeriesUnavailable):
        cube_root_series(Extended(5, ((1, 0, 1.0),)))


def test_synthetic_series_fit_recovers_parameters():
    ser = cube_root_series(TABLE2_EQ)
    x0, a3 = 1.0, 0.2
    x = x0 - 1e-9
    y, w = ser.y(x - x0, x0, a3), ser.w(x - x0, x0, a3)
    fx0, fa3, res = fit_cube_root(ser, x, y, w)
    assert fx0 == pytest.approx(x0, abs=1e-6)
    assert fa3 == pytest.approx(a3, abs=1e-6)
    assert res < 1e-6


# -- extended integration ------------------------------------------------------------


def _swap_reference(forcing, slope, x_max, n=3, y_sw=50.0):
    """Independent route: switch the independent variable to s = 1/y.

    With ``w = y' + y^(n+1)/n`` the system ``dx/ds = n s^(n-1)/(1 - n w s^(n+1))``,
    ``dw/ds = F dx/ds`` is regular at ``s = 0``, the singular point itself.
    """

    def fx(x, S):
        y, w = S
        return [w - y ** (n + 1) / n, sum(a * x**m * y**k for m, k, a in forcing)]

    def fs(s, S):
        x, w = S
        den = 1 - n * w * s ** (n + 1)
        return [n * s ** (n - 1) / den, sum(a * x**m * n * s ** (n - 1 - k) for m, k, a in forcing) / den]

    ev = lambda x, S: S[0] + y_sw  # noqa: E731
    ev.terminal, ev.direction = True, -1
    x, S, xs = 0.0, [0.0, slope], []
    while True:
        r = solve_ivp(fx, (x, x_max), S, events=ev, rtol=1e-12, atol=1e-13, method="DOP853")
        if r.status != 1:
            return xs, r.y[:, -1]
        x, (y, w) = r.t[-1], r.y[:, -1]
        r2 = solve_ivp(fs, (1 / y, 1 / y_sw), [x, w], rtol=1e-12, atol=1e-13, method="DOP853", dense_output=True)
        xs.append(float(r2.sol(0.0)[0]))
        x, w = r2.y[:, -1]
        S = [y_sw, w]


@pytest.mark.parametrize(
    "forcing,slope",
    [(((1, 0, 1.0),), -4.0), (((1, 1, -1.0),), -2.0), (((1, 0, 0.5), (1, 1, 0.7)), -3.0)],
)
def test_series_jump_agrees_with_swap_oracle(forcing, slope):
    xs, (y_ref, w_ref) = _swap_reference(forcing, slope, 8.0)
    t = integrate_extended(Extended(3, forcing), 0.0, slope, IntegratorConfig(x_max=8.0))
    assert t.pole_count == len(xs) >= 1
    assert [e.x0 for e in t.events] == pytest.approx(xs, abs=1e-6)
    assert t.y[-1] == pytest.approx(y_ref, abs=1e-5)
    assert t.aux[-1] == pytest.approx(w_ref, abs=1e-5)
    assert all(e.kind is EventKind.CUBE_ROOT and e.fit_residual < 1e-10 for e in t.events)


@pytest.mark.parametrize(
    "kw", [{"jump_delta": 5e-4}, {"jump_delta": 2e-3}, {"y_switch": 3e3}, {"y_switch": 3e2}]
)
def test_extended_invariant_under_jump_parameters(kw):
    base = integrate_extended(TABLE2_EQ, 0.0, -4.0, IntegratorConfig(x_max=8.0))
    alt = integrate_extended(TABLE2_EQ, 0.0, -4.0, IntegratorConfig(x_max=8.0, **kw))
    assert alt.pole_count == base.pole_count == 2
    assert alt.y[-1] == pytest.approx(base.y[-1], rel=1e-8)
    assert [e.x0 for e in alt.events] == pytest.approx([e.x0 for e in base.events], abs=1e-8)


def test_extended_exponent_is_minus_one_third():
    t = integrate_extended(TABLE2_EQ, 0.0, -2.0, IntegratorConfig(x_max=20.0, sample_spacing=1e-3))
    assert t.pole_count >= 1
    assert singular_exponent_fit(t, 0) == pytest.approx(-1 / 3, abs=0.02)


def test_extended_capture():
    cfg = IntegratorConfig(x_max=20.0, stop_on_capture=True)
    t = integrate_extended(TABLE2_EQ, 0.0, -4.0, cfg)
    assert t.terminated is Termination.CAPTURED
    assert t.pole_count == 2
    # no capture shortcut when a forcing coefficient is negative
    t3 = integrate_extended(TABLE3_EQ, 0.0, -2.0, cfg)
    assert t3.terminated is Termination.REACHED_X_MAX


def test_extended_without_series_raises_at_singularity():
    with pytest.raises(SeriesUnavailable):
        integrate_extended(Extended(3, ((2, 0, 1.0),)), 0.0, -5.0, IntegratorConfig(x_max=10.0))


# -- export --------------------------------------------------------------------------


def test_write_trajectory(tmp_path):
    t = integrate_riccati(X2, 5.0, 0.0, IntegratorConfig(x_max=2.0), with_slope=True)
    path = tmp_path / "run.csv"
    write_trajectory(t, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,yprime"
    assert len(lines) == len(t.x) + 1
    assert all(len(v.split("e")[0].replace("-", "").replace(".", "")) <= 12 for v in lines[1].split(","))
    events = json.loads((tmp_path / "run.events.json").read_text())
    assert events[0]["kind"] == "SimplePole"
    assert events[0]["x0"] == pytest.approx(1 / math.sqrt(2), abs=1e-10)
    t1 = integrate_riccati(X2, 5.0, 0.0, IntegratorConfig(x_max=2.0))
    write_trajectory(t1, tmp_path / "first.csv", tmp_path / "ev.json")
    assert (tmp_path / "first.csv").read_text().splitlines()[1].endswith(",")
