"""Adaptive Dormand-Prince integration through movable singularities.

Two drivers share one embedded 5(4) stepper:

`integrate_riccati`
    ``y' = -y**2 + V(x) - E``.  Poles are crossed exactly by switching to
    ``u = 1/y``, which obeys the regular equation ``u' = 1 - (V - E) u**2``.
`integrate_extended`
    ``y'' = -(4/3) y' y**3 + F(x, y)``.  The state is ``(y, w)`` with
    ``w = y' + y**4/3``; ``w`` stays bounded at the cube-root singularities
    while ``y'`` does not, so it carries the information needed to fit the
    local series.  Singularities are crossed by fitting the truncated local
    series and restarting just past the singular point.

Both solution families dive to ``-inf`` and re-enter from ``+inf``.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .problems import Extended, PotentialSpec, ProblemError

__all__ = [
    "CubeRootSeries",
    "EventKind",
    "InsufficientSamples",
    "IntegratorConfig",
    "SeriesFitFailure",
    "SeriesUnavailable",
    "SingularEvent",
    "Termination",
    "Trajectory",
    "cube_root_series",
    "fit_cube_root",
    "integrate_extended",
    "integrate_riccati",
    "singular_exponent_fit",
    "write_trajectory",
]


class SeriesFitFailure(RuntimeError):
    """Newton iteration for the local series parameters did not converge."""


class SeriesUnavailable(NotImplementedError):
    """No local singularity series is known for this forcing."""


class InsufficientSamples(ValueError):
    """Too few samples near a singularity to fit its exponent."""


class EventKind(str, enum.Enum):
    SIMPLE_POLE = "SimplePole"
    CUBE_ROOT = "CubeRoot"


class Termination(str, enum.Enum):
    REACHED_X_MAX = "ReachedXMax"
    SINGULAR_BUDGET_EXHAUSTED = "SingularBudgetExhausted"
    STEP_UNDERFLOW = "StepUnderflow"
    # the state entered a region that provably contains no further singularities
    CAPTURED = "Captured"


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances, step bounds and singularity handling parameters.

    `sample_spacing` caps the gap between stored samples away from
    singularities.  With `stop_on_capture` the integration ends as soon as
    the solution enters the basin of the stable branch, where no further
    singularities can occur; the singularity count is then final.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    h_init: float = 1e-4
    h_min: float = 1e-16
    h_max: float = 0.1
    y_switch: float = 1e3
    x_max: float = 12.0
    max_singularities: int = 200
    jump_delta: float = 1e-3
    sample_spacing: float = 0.05
    stop_on_capture: bool = False

    def __post_init__(self):
        problems = []
        if not (self.rtol > 0 and self.atol > 0):
            problems.append(("rtol", "rtol and atol must be positive"))
        if not (0 < self.h_min < self.h_init < self.h_max):
            problems.append(("h_init", "need 0 < h_min < h_init < h_max"))
        if not self.y_switch >= 10:
            problems.append(("y_switch", "y_switch must be at least 10"))
        if not self.jump_delta > 0:
            problems.append(("jump_delta", "jump_delta must be positive"))
        if not self.x_max > 0:
            problems.append(("x_max", "x_max must be positive"))
        if not self.max_singularities >= 0:
            problems.append(("max_singularities", "max_singularities must be nonnegative"))
        if not self.sample_spacing > 0:
            problems.append(("sample_spacing", "sample_spacing must be positive"))
        if problems:
            key, msg = problems[0]
            raise ProblemError(msg, key=key)

    def with_(self, **changes) -> "IntegratorConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class SingularEvent:
    x0: float
    kind: EventKind
    a3: float | None = None
    fit_residual: float = 0.0

    def to_dict(self) -> dict:
        return {"x0": self.x0, "kind": self.kind.value, "a3": self.a3, "fit_residual": self.fit_residual}


@dataclass
class Trajectory:
    """Samples of ``y`` (and ``y'`` for second-order runs) plus singular events."""

    x: np.ndarray
    y: np.ndarray
    yprime: np.ndarray | None
    events: list[SingularEvent]
    terminated: Termination
    aux: np.ndarray | None = field(default=None, repr=False)

    @property
    def pole_count(self) -> int:
        return len(self.events)

    @property
    def x_end(self) -> float:
        return float(self.x[-1])


# -- Dormand-Prince 5(4) -----------------------------------------------------

_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9

_SAFETY = 0.9
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5


class _StepUnderflow(Exception):
    pass


class _Recorder:
    """Collects samples; fills long steps with cubic Hermite points."""

    def __init__(self, spacing: float, to_output: Callable):
        self.spacing = spacing
        self.to_output = to_output
        self.xs: list[float] = []
        self.rows: list[tuple] = []

    def add(self, x, s):
        out = self.to_output(x, s)
        if out is not None:
            self.xs.append(x)
            self.rows.append(out)

    def add_step(self, x0, s0, f0, x1, s1, f1):
        h = x1 - x0
        if h > self.spacing:
            m = int(math.ceil(h / self.spacing))
            for j in range(1, m):
                th = j / m
                h00 = (1 + 2 * th) * (1 - th) ** 2
                h10 = th * (1 - th) ** 2
                h01 = th * th * (3 - 2 * th)
                h11 = th * th * (th - 1)
                s = tuple(
                    h00 * a + h10 * h * da + h01 * b + h11 * h * db
                    for a, da, b, db in zip(s0, f0, s1, f1)
                )
                self.add(x0 + th * h, s)
        self.add(x1, s1)


def _solve_segment(f, x, s, x_end, h, cfg, stop, rec, on_step=None):
    """Advance ``s' = f(x, s)`` from `x` toward `x_end`.

    Returns ``(x, s, h, reason)`` where ``reason`` is ``"end"`` or the value
    returned by ``stop(x, s)`` at the first accepted step where it is truthy.
    `on_step(x0, s0, f0, x1, s1, f1)` may veto a step by returning a new
    step size to retry with.
    """
    rtol, atol = cfg.rtol, cfg.atol
    h_max, h_min = cfg.h_max, cfg.h_min
    dim = len(s)
    k1 = f(x, s)
    err_prev = 1e-4
    rejected = False
    while x < x_end:
        if h > x_end - x:
            h = x_end - x
        x_new = x + h
        h = x_new - x
        k2 = f(x + _C2 * h, tuple(s[i] + h * _A21 * k1[i] for i in range(dim)))
        k3 = f(x + _C3 * h, tuple(s[i] + h * (_A31 * k1[i] + _A32 * k2[i]) for i in range(dim)))
        k4 = f(
            x + _C4 * h,
            tuple(s[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i]) for i in range(dim)),
        )
        k5 = f(
            x + _C5 * h,
            tuple(
                s[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
                for i in range(dim)
            ),
        )
        k6 = f(
            x_new,
            tuple(
                s[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i])
                for i in range(dim)
            ),
        )
        s_new = tuple(
            s[i] + h * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i] + _B6 * k6[i])
            for i in range(dim)
        )
        finite = all(math.isfinite(v) for v in s_new)
        if finite:
            k7 = f(x_new, s_new)
            acc = 0.0
            for i in range(dim):
                e = h * (
                    _E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i]
                )
                sc = atol + rtol * max(abs(s[i]), abs(s_new[i]))
                acc += (e / sc) ** 2
            err = math.sqrt(acc / dim)
            finite = math.isfinite(err)
        if not finite:
            err = 1e10
        if err <= 1.0:
            retry = on_step(x, s, k1, x_new, s_new, k7) if on_step is not None else None
            if retry is not None:
                h = retry
                rejected = True
                if h < h_min:
                    raise _StepUnderflow(x)
                continue
            if err == 0.0:
                fac = 5.0
            else:
                fac = _SAFETY * err ** (-_ALPHA) * err_prev**_BETA
                fac = min(5.0, max(0.2, fac))
            if rejected:
                fac = min(1.0, fac)
            err_prev = max(err, 1e-4)
            rec.add_step(x, s, k1, x_new, s_new, k7)
            x, s, k1 = x_new, s_new, k7
            h = min(h * fac, h_max)
            rejected = False
            reason = stop(x, s)
            if reason:
                return x, s, h, reason
        else:
            fac = max(0.2, _SAFETY * err ** (-1 / 5)) if err < 1e10 else 0.1
            h *= fac
            rejected = True
            if h < h_min:
                raise _StepUnderflow(x)
    return x, s, h, "end"


def _hermite(s0, f0, s1, f1, h, th):
    h00 = (1 + 2 * th) * (1 - th) ** 2
    h10 = th * (1 - th) ** 2
    h01 = th * th * (3 - 2 * th)
    h11 = th * th * (th - 1)
    return h00 * s0 + h10 * h * f0 + h01 * s1 + h11 * h * f1


def _hermite_root(s0, f0, s1, f1, h):
    """Root in ``(0, 1)`` of the cubic Hermite interpolant (sign change assumed)."""
    lo, hi = 0.0, 1.0
    flo = s0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = _hermite(s0, f0, s1, f1, h, mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    th = 0.5 * (lo + hi)
    return th, abs(_hermite(s0, f0, s1, f1, h, th))


def _trajectory(rec, second_order, events, term, aux=False):
    x = np.array(rec.xs)
    rows = np.array(rec.rows, dtype=float).reshape(len(rec.xs), -1)
    y = rows[:, 0]
    yp = rows[:, 1] if second_order else None
    w = rows[:, 2] if aux else None
    return Trajectory(x=x, y=y, yprime=yp, events=events, terminated=term, aux=w)


# -- Riccati -----------------------------------------------------------------


def integrate_riccati(
    V: PotentialSpec,
    E: float,
    y0: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    *,
    with_slope: bool = False,
) -> Trajectory:
    """Integrate ``y' = -y**2 + V(x) - E`` from ``y(0) = y0`` to ``cfg.x_max``.

    Whenever ``|y| > y_switch`` the integration continues in ``u = 1/y`` and
    each sign change of ``u`` is recorded as a `SimplePole` event.  The run
    switches back once ``|u| > 1/y_switch``.

    With `with_slope` the trajectory also carries ``y'`` evaluated from the
    equation, as for a master-equation run.
    """
    c = V.coefficients
    E = float(E)
    u_switch = 1.0 / cfg.y_switch

    def f_y(x, s):
        acc = 0.0
        for cj in reversed(c):
            acc = acc * x + cj
        return (acc - E - s[0] * s[0],)

    def f_u(x, s):
        acc = 0.0
        for cj in reversed(c):
            acc = acc * x + cj
        return (1.0 - (acc - E) * s[0] * s[0],)

    def out_y(x, s):
        y = s[0]
        return (y, V(x) - E - y * y) if with_slope else (y,)

    def out_u(x, s):
        if s[0] == 0.0:
            return None
        y = 1.0 / s[0]
        return (y, V(x) - E - y * y) if with_slope else (y,)

    x_cap = math.inf
    if cfg.stop_on_capture and V.is_confining:
        x_cap = V.last_crossing(E)

    events: list[SingularEvent] = []
    rec_y = _Recorder(cfg.sample_spacing, out_y)
    rec_u = _Recorder(cfg.sample_spacing, out_u)
    # both recorders append into the same lists
    rec_u.xs, rec_u.rows = rec_y.xs, rec_y.rows

    def stop_y(x, s):
        if abs(s[0]) > cfg.y_switch:
            return "switch"
        if len(events) > cfg.max_singularities:
            return "budget"
        if s[0] > 0.0 and x > x_cap:
            return "captured"
        return None

    def stop_u(x, s):
        if abs(s[0]) > u_switch:
            return "switch"
        if len(events) > cfg.max_singularities:
            return "budget"
        return None

    def on_step_u(xa, sa, fa, xb, sb, fb):
        ua, ub = sa[0], sb[0]
        if ua * ub < 0.0 or (ub == 0.0 and ua != 0.0):
            th, res = _hermite_root(ua, fa[0], ub, fb[0], xb - xa)
            events.append(SingularEvent(xa + th * (xb - xa), EventKind.SIMPLE_POLE, None, res))
        return None

    x = 0.0
    h = cfg.h_init
    y0 = float(y0)
    if abs(y0) > cfg.y_switch:
        mode, s = "u", ((1.0 / y0) if math.isfinite(y0) else 0.0,)
    else:
        mode, s = "y", (y0,)
    (rec_y if mode == "y" else rec_u).add(x, s)
    term = Termination.REACHED_X_MAX
    try:
        while x < cfg.x_max:
            if mode == "y":
                x, s, h, why = _solve_segment(f_y, x, s, cfg.x_max, h, cfg, stop_y, rec_y)
                if why == "switch":
                    mode, s = "u", (1.0 / s[0],)
                elif why == "captured":
                    term = Termination.CAPTURED
                    break
                elif why == "budget":
                    term = Termination.SINGULAR_BUDGET_EXHAUSTED
                    break
            else:
                x, s, h, why = _solve_segment(f_u, x, s, cfg.x_max, h, cfg, stop_u, rec_u, on_step_u)
                if why == "switch":
                    mode, s = "y", (1.0 / s[0],)
                elif why == "budget":
                    term = Termination.SINGULAR_BUDGET_EXHAUSTED
                    break
    except _StepUnderflow:
        term = Termination.STEP_UNDERFLOW
    if len(events) > cfg.max_singularities:
        term = Termination.SINGULAR_BUDGET_EXHAUSTED
    return _trajectory(rec_y, with_slope, events, term)


# -- cube-root singularities of the n = 3 extended equations -------------------


@dataclass(frozen=True)
class CubeRootSeries:
    """Truncated local expansion around a cube-root singularity at ``x0``.

    With ``s = (x - x0)**(1/3)`` (real cube root) the solution is
    ``y = 1/s + a3 s**3 + ...`` and ``w = y' + y**4/3 = 7 a3 / 3 + ...``.
    `y_terms` and `w_terms` hold ``(power of s, coefficient(x0, a3))`` pairs.
    The ``w`` expansion is exact through ``s**6``, consistent with the
    ``O(s**10)`` truncation of ``y``.
    """

    y_terms: tuple[tuple[int, Callable[[float, float], float]], ...]
    w_terms: tuple[tuple[int, Callable[[float, float], float]], ...]

    def y(self, t: float, x0: float, a3: float) -> float:
        s = np.cbrt(t)
        return sum(c(x0, a3) * s**p for p, c in self.y_terms)

    def w(self, t: float, x0: float, a3: float) -> float:
        s = np.cbrt(t)
        return sum(c(x0, a3) * s**p for p, c in self.w_terms)

    def yprime(self, t: float, x0: float, a3: float) -> float:
        s = np.cbrt(t)
        return sum(c(x0, a3) * p / 3.0 * s ** (p - 3) for p, c in self.y_terms)


def _forcing_weights(spec: Extended) -> tuple[float, float] | None:
    """Coefficients ``(A, B)`` when the forcing is ``A x + B x y``, else None."""
    A = B = 0.0
    for m, k, a in spec.forcing:
        if (m, k) == (1, 0):
            A += a
        elif (m, k) == (1, 1):
            B += a
        elif a != 0.0:
            return None
    return A, B


def cube_root_series(spec: Extended) -> CubeRootSeries:
    """Local singularity series of ``y'' = -(4/3) y' y**3 + A x + B x y``.

    ``y = 1/s + a3 s**3 + (B x0/2) s**5 + (3 A x0/10) s**6 - (6 a3**2/11) s**7
    + (3B/20) s**8 + (3A/26 - 9 B a3 x0/26) s**9 + O(s**10)``, which reduces to
    the two known expansions for ``(A, B) = (1, 0)`` and ``(0, 1)``.
    """
    weights = _forcing_weights(spec) if spec.n == 3 else None
    if weights is None:
        raise SeriesUnavailable(
            f"no cube-root series for n={spec.n}, forcing={list(spec.forcing)}; "
            "supported: n=3 with forcing A*x + B*x*y"
        )
    A, B = weights
    return CubeRootSeries(
        y_terms=(
            (-1, lambda x0, a3: 1.0),
            (3, lambda x0, a3: a3),
            (5, lambda x0, a3: 0.5 * B * x0),
            (6, lambda x0, a3: 0.3 * A * x0),
            (7, lambda x0, a3: -6.0 * a3 * a3 / 11.0),
            (8, lambda x0, a3: 0.15 * B),
            (9, lambda x0, a3: (3.0 * A - 9.0 * B * a3 * x0) / 26.0),
        ),
        w_terms=(
            (0, lambda x0, a3: 7.0 * a3 / 3.0),
            (2, lambda x0, a3: 1.5 * B * x0),
            (3, lambda x0, a3: A * x0),
            (5, lambda x0, a3: 0.6 * B),
            (6, lambda x0, a3: 0.5 * (A + B * a3 * x0)),
        ),
    )


def fit_cube_root(
    series: CubeRootSeries, x: float, y: float, w: float, *, tol: float = 1e-6, max_iter: int = 50
) -> tuple[float, float, float]:
    """Fit ``(x0, a3)`` so the series reproduces ``(y, w)`` at `x`.

    Newton iteration on the unknowns ``(t, a3)`` with ``t = x - x0``.
    Returns ``(x0, a3, residual)`` where the residual is the larger of the
    relative ``y`` mismatch and the ``w`` mismatch scaled by ``1 + |w|``.
    """
    t = 1.0 / y**3
    a3 = 3.0 * w / 7.0

    def resid(t, a3):
        x0 = x - t
        return (
            (series.y(t, x0, a3) - y) / abs(y),
            (series.w(t, x0, a3) - w) / (1.0 + abs(w)),
        )

    r = resid(t, a3)
    for _ in range(max_iter):
        dt = 1e-6 * abs(t)
        da = 1e-6 * max(1.0, abs(a3))
        rt = resid(t + dt, a3)
        ra = resid(t, a3 + da)
        j11, j21 = (rt[0] - r[0]) / dt, (rt[1] - r[1]) / dt
        j12, j22 = (ra[0] - r[0]) / da, (ra[1] - r[1]) / da
        det = j11 * j22 - j12 * j21
        if det == 0.0 or not math.isfinite(det):
            break
        step_t = (r[0] * j22 - r[1] * j12) / det
        step_a = (j11 * r[1] - j21 * r[0]) / det
        # keep t on the same side of the singularity
        while abs(step_t) >= abs(t):
            step_t *= 0.5
        t -= step_t
        a3 -= step_a
        r = resid(t, a3)
        if max(abs(r[0]), abs(r[1])) < 1e-14:
            break
    res = max(abs(r[0]), abs(r[1]))
    if not (res < tol) or not math.isfinite(res):
        raise SeriesFitFailure(f"cube-root series fit at x={x!r} left residual {res:.3g}")
    return x - t, a3, res


def integrate_extended(
    spec: Extended,
    y0: float,
    yp0: float,
    cfg: IntegratorConfig = IntegratorConfig(x_max=20.0),
) -> Trajectory:
    """Integrate ``y'' = -((n+1)/n) y' y**n + F(x, y)`` from ``(y0, yp0)``.

    When ``y < -y_switch`` with ``y' < 0`` the local cube-root series is fitted
    to the current state, a `CubeRoot` event is recorded, and integration
    restarts at ``x0 + jump_delta`` from the series values.  Samples carry
    ``y``, ``y'`` and ``w = y' + y**(n+1)/n`` (`Trajectory.aux`).

    Raises
    ------
    SeriesUnavailable
        When a singularity is met for an equation without a known series.
    SeriesFitFailure
        When the series fit does not converge.
    """
    n = spec.n
    inv_n = 1.0 / n
    forcing = spec.forcing
    series = None

    def f(x, s):
        y, w = s
        return (w - y ** (n + 1) * inv_n, sum(a * x**m * y**k for m, k, a in forcing))

    def out(x, s):
        y, w = s
        return (y, w - y ** (n + 1) * inv_n, w)

    capture_ok = cfg.stop_on_capture and all(a >= 0.0 for _, _, a in forcing)

    def stop(x, s):
        y, w = s
        if y < -cfg.y_switch and w - y ** (n + 1) * inv_n < 0.0:
            return "singular"
        if capture_ok and y > 0.0 and w > 0.0:
            return "captured"
        return None

    rec = _Recorder(cfg.sample_spacing, out)
    events: list[SingularEvent] = []
    x = 0.0
    s = (float(y0), float(yp0) + float(y0) ** (n + 1) * inv_n)
    rec.add(x, s)
    h = cfg.h_init
    term = Termination.REACHED_X_MAX
    try:
        while x < cfg.x_max:
            x, s, h, why = _solve_segment(f, x, s, cfg.x_max, h, cfg, stop, rec)
            if why == "captured":
                term = Termination.CAPTURED
                break
            if why != "singular":
                continue
            if series is None:
                series = cube_root_series(spec)
            x0, a3, res = fit_cube_root(series, x, s[0], s[1])
            events.append(SingularEvent(x0, EventKind.CUBE_ROOT, a3, res))
            if len(events) > cfg.max_singularities:
                term = Termination.SINGULAR_BUDGET_EXHAUSTED
                break
            x = x0 + cfg.jump_delta
            s = (series.y(cfg.jump_delta, x0, a3), series.w(cfg.jump_delta, x0, a3))
            rec.add(x, s)
            h = cfg.h_init * cfg.jump_delta
    except _StepUnderflow:
        term = Termination.STEP_UNDERFLOW
    return _trajectory(rec, True, events, term, aux=True)


# -- diagnostics and export --------------------------------------------------


def singular_exponent_fit(traj: Trajectory, event_index: int, y_switch: float = 1e3) -> float:
    """Blow-up exponent from a log-log fit of ``|y|`` against ``x0 - x``.

    Uses the samples between the previous event and event `event_index` with
    ``-y_switch <= y <= -y_switch/10``.  Expect -1 for simple poles and -1/3
    for cube roots.
    """
    if not 0 <= event_index < len(traj.events):
        raise IndexError(f"trajectory has no event {event_index}")
    x0 = traj.events[event_index].x0
    lo = traj.events[event_index - 1].x0 if event_index > 0 else -math.inf
    ay = np.abs(traj.y)
    # both singularity types are approached from below; the large positive
    # samples just past the previous event belong to that event
    mask = (traj.x > lo) & (traj.x < x0) & (traj.y < 0) & (ay >= y_switch / 10) & (ay <= y_switch)
    if mask.sum() < 10:
        raise InsufficientSamples(
            f"only {int(mask.sum())} samples with |y| in [{y_switch / 10:g}, {y_switch:g}] before event {event_index}"
        )
    slope, _ = np.polyfit(np.log(x0 - traj.x[mask]), np.log(ay[mask]), 1)
    return float(slope)


def _fmt(v) -> str:
    if v is None:
        return ""
    # adding 0.0 folds -0.0 into 0.0
    return format(float(v) + 0.0, ".12g")


def write_trajectory(traj: Trajectory, csv_path: Path | str, events_path: Path | str | None = None) -> None:
    """Write ``x,y,yprime`` CSV and a JSON list of events next to it."""
    csv_path = Path(csv_path)
    if events_path is None:
        events_path = csv_path.with_suffix(".events.json")
    with open(csv_path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["x", "y", "yprime"])
        yp = traj.yprime
        for i in range(len(traj.x)):
            wr.writerow([_fmt(traj.x[i]), _fmt(traj.y[i]), _fmt(None if yp is None else yp[i])])
    with open(events_path, "w") as fh:
        json.dump([ev.to_dict() for ev in traj.events], fh, indent=2)
        fh.write("\n")


def config_to_dict(cfg: IntegratorConfig) -> dict:
    return asdict(cfg)
