import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from separatrix.classify import Regime, Terminal, classify, stability_probe
from separatrix.integrate import IntegratorConfig, integrate_extended, integrate_riccati
from separatrix.problems import Extended, PotentialSpec

X2 = PotentialSpec((0, 0, 1.0))
X4 = PotentialSpec((0, 0, 0, 0, 1.0))


def test_classify_stable_branch():
    t = integrate_riccati(X2, 3.0, 0.0, IntegratorConfig(x_max=12.0))
    c = classify(t, X2, 3.0)
    assert c.terminal is Terminal.STABLE_BRANCH
    assert c.pole_count == 1
    # finite-x correction to the asymptote is about V'/(4 (V - E)^(3/2))
    assert c.branch_distance < 1e-2
    assert isinstance(c.branch_distance, float)
    assert c.settled
    assert c.to_dict()["terminal"] == "StableBranch"


def test_classify_captured():
    t = integrate_riccati(X2, 3.0, 0.0, IntegratorConfig(x_max=12.0, stop_on_capture=True))
    c = classify(t, X2, 3.0)
    assert c.terminal is Terminal.CAPTURED
    assert c.pole_count == 1


def test_classify_unresolved_when_window_too_short():
    t = integrate_riccati(X2, 3.0, 0.0, IntegratorConfig(x_max=0.5))
    assert classify(t, X2, 3.0).terminal is Terminal.UNRESOLVED
    t = integrate_riccati(X2, 3.0, 0.0, IntegratorConfig(x_max=12.0, max_singularities=0))
    c = classify(t, X2, 3.0)
    assert not c.settled


def test_classify_extended_branch():
    eq = Extended(3, ((1, 0, 1.0),))
    t = integrate_extended(eq, 0.0, -4.0, IntegratorConfig(x_max=20.0))
    c = classify(t, n=3)
    assert c.terminal is Terminal.STABLE_BRANCH
    assert c.pole_count == 2


@given(st.floats(0.0, 60.0), st.floats(0.0, 60.0))
@settings(max_examples=25, deadline=None)
def test_pole_count_monotone_in_energy(e1, e2):
    lo, hi = sorted((e1, e2))
    cfg = IntegratorConfig(x_max=8.0)
    a = classify(integrate_riccati(X4, lo, 0.0, cfg), X4, lo).pole_count
    b = classify(integrate_riccati(X4, hi, 0.0, cfg), X4, hi).pole_count
    assert a <= b


@given(
    st.sampled_from([X2, X4]),
    st.floats(0.0, 20.0),
    st.floats(-3.0, 3.0),
    st.floats(1e-8, 1e-3),
    st.booleans(),
)
@settings(max_examples=40, deadline=None)
def test_phi_keeps_its_sign(V, E, y0, mag, negative):
    delta = -mag if negative else mag
    p = stability_probe(V, E, y0, delta, IntegratorConfig(x_max=4.0, sample_spacing=0.02))
    assert np.all(np.sign(p.phi) == np.sign(delta))


def test_log_derivative_near_stable_branch():
    p = stability_probe(X2, 1.0, 0.5, 1e-4)
    assert p.regime is Regime.STABLE_ATTRACTION
    Y3 = float(np.interp(3.0, p.x, p.base))
    assert Y3 > 0
    assert p.numerical_log_derivative(3.0) == pytest.approx(-2 * Y3, rel=0.05)
    assert p.log_derivative(3.0) == pytest.approx(p.numerical_log_derivative(3.0), rel=1e-3)


def test_separatrix_perturbations_split():
    cfg = IntegratorConfig(x_max=8.0)
    up = integrate_riccati(X2, 1.0, 1e-4, cfg)
    down = integrate_riccati(X2, 1.0, -1e-4, cfg)
    assert up.pole_count == 0
    xe = up.x[-1]
    # upper branch with its leading finite-x correction
    assert up.y[-1] == pytest.approx(math.sqrt(xe**2 - 1.0) - xe / (2 * (xe**2 - 1.0)), rel=1e-3)
    assert down.pole_count >= 1
    assert down.events[0].x0 < 5.0
    # seen from the separatrix both perturbations depart
    for delta in (1e-4, -1e-4):
        p = stability_probe(X2, 1.0, 0.0, delta)
        assert p.regime is Regime.UNSTABLE_DEPARTURE
    assert stability_probe(X2, 1.0, 0.0, -1e-4).ended_at_pole


def test_probe_rejects_bad_delta():
    with pytest.raises(ValueError):
        stability_probe(X2, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        stability_probe(X2, 1.0, 0.0, 0.1)
