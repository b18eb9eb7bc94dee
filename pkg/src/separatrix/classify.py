"""Trajectory classification and the stability probe.

Shooting needs one discrete number per trial: how many singularities the
solution passes before it settles.  `classify` reports that count together
with whether the run ended on the stable branch of the asymptotes
``y ~ +/- sqrt(V - E)`` (Riccati) or ``y ~ (n w)**(1/(n+1))`` (extended).

`stability_probe` measures the difference ``phi = y - Y`` between a base and
a perturbed Riccati solution.  It integrates the exact difference equation
``phi' = -2 Y phi - phi**2`` alongside ``Y``, so ``phi`` is resolved to
relative accuracy even when it is far below the size of ``Y``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .integrate import IntegratorConfig, Termination, Trajectory, _Recorder, _solve_segment, _StepUnderflow
from .problems import PotentialSpec

__all__ = ["Classification", "Regime", "StabilityProbe", "Terminal", "classify", "stability_probe"]


class Terminal(str, enum.Enum):
    STABLE_BRANCH = "StableBranch"
    # stopped early inside the basin of the stable branch
    CAPTURED = "Captured"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class Classification:
    pole_count: int
    terminal: Terminal
    branch_distance: float

    @property
    def settled(self) -> bool:
        return self.terminal is not Terminal.UNRESOLVED

    def to_dict(self) -> dict:
        return {
            "pole_count": self.pole_count,
            "terminal": self.terminal.value,
            "branch_distance": self.branch_distance,
        }


def _branch_value(traj: Trajectory, V: PotentialSpec | None, E: float | None, n: int) -> float:
    x = traj.x[-1]
    if V is not None:
        gap = V(x) - E
        return math.sqrt(gap) if gap > 0 else math.nan
    if traj.aux is not None:
        w = traj.aux[-1]
        return (n * w) ** (1.0 / (n + 1)) if w > 0 else math.nan
    return math.nan


def classify(
    traj: Trajectory,
    V: PotentialSpec | None = None,
    E: float | None = None,
    branch_tol: float = 1e-2,
    n: int = 3,
) -> Classification:
    """Singularity count and terminal branch of a trajectory.

    For Riccati runs pass `V` and `E`; the stable branch is
    ``+sqrt(V - E)``.  Otherwise the branch is read from the auxiliary
    variable ``w`` of an extended run with exponent `n`.
    """
    count = traj.pole_count
    dist = math.nan
    if traj.terminated in (Termination.REACHED_X_MAX, Termination.CAPTURED):
        b = _branch_value(traj, V, E, n)
        if math.isfinite(b) and b > 0:
            dist = float(abs(traj.y[-1] - b) / b)
    if traj.terminated is Termination.CAPTURED:
        return Classification(count, Terminal.CAPTURED, dist)
    if traj.terminated is Termination.REACHED_X_MAX and dist < branch_tol:
        return Classification(count, Terminal.STABLE_BRANCH, dist)
    return Classification(count, Terminal.UNRESOLVED, dist)


class Regime(str, enum.Enum):
    STABLE_ATTRACTION = "StableAttraction"
    UNSTABLE_DEPARTURE = "UnstableDeparture"
    UNDETERMINED = "Undetermined"


@dataclass
class StabilityProbe:
    """Base solution ``Y`` and the perturbation ``phi`` sampled on ``x``."""

    x: np.ndarray
    base: np.ndarray
    phi: np.ndarray
    delta: float
    regime: Regime
    ended_at_pole: bool

    def log_derivative(self, x: float) -> float:
        """``d(ln|phi|)/dx`` at `x` from the difference equation."""
        Y = float(np.interp(x, self.x, self.base))
        phi = float(np.interp(x, self.x, self.phi))
        return -2.0 * Y - phi

    def numerical_log_derivative(self, x: float) -> float:
        """``d(ln|phi|)/dx`` at `x` by finite differences of the samples."""
        lp = np.log(np.abs(self.phi))
        g = np.gradient(lp, self.x)
        return float(np.interp(x, self.x, g))


def stability_probe(
    V: PotentialSpec,
    E: float,
    base_y0: float,
    delta: float,
    cfg: IntegratorConfig = IntegratorConfig(x_max=8.0, sample_spacing=0.01),
) -> StabilityProbe:
    """Follow a perturbation of size `delta` around a Riccati solution.

    Integration stops at `cfg.x_max` or when either solution approaches a
    pole (``|y| > y_switch``); ``phi`` keeps one sign up to that point.

    The regime is `StableAttraction` when ``|phi|`` shrinks at least tenfold
    between ``x = 1`` and the end, `UnstableDeparture` when the perturbed
    solution reaches a pole or ``phi`` comes within 20% of ``-2Y``.
    """
    if delta == 0 or abs(delta) > 1e-3:
        raise ValueError("delta must be nonzero with |delta| <= 1e-3")
    c = V.coefficients
    E = float(E)

    def f(x, s):
        Y, phi = s
        acc = 0.0
        for cj in reversed(c):
            acc = acc * x + cj
        return (acc - E - Y * Y, -2.0 * Y * phi - phi * phi)

    departed = []

    def stop(x, s):
        Y, phi = s
        if abs(Y) > cfg.y_switch or abs(Y + phi) > cfg.y_switch:
            return "pole"
        if Y < 0 and abs(phi / (-2.0 * Y) - 1.0) < 0.2 and not departed:
            departed.append(x)
        return None

    rec = _Recorder(cfg.sample_spacing, lambda x, s: s)
    s = (float(base_y0), float(delta))
    rec.add(0.0, s)
    # phi is tracked relative to itself, not to the size of Y
    seg_cfg = cfg.with_(atol=min(cfg.atol, abs(delta) * 1e-12))
    ended_at_pole = False
    try:
        _, _, _, why = _solve_segment(f, 0.0, s, cfg.x_max, cfg.h_init, seg_cfg, stop, rec)
        ended_at_pole = why == "pole"
    except _StepUnderflow:
        pass
    x = np.array(rec.xs)
    rows = np.array(rec.rows)
    Y, phi = rows[:, 0], rows[:, 1]
    if ended_at_pole or departed:
        regime = Regime.UNSTABLE_DEPARTURE
    else:
        phi1 = abs(float(np.interp(1.0, x, phi)))
        regime = Regime.STABLE_ATTRACTION if abs(phi[-1]) * 10.0 <= phi1 else Regime.UNDETERMINED
    return StabilityProbe(x=x, base=Y, phi=phi, delta=float(delta), regime=regime, ended_at_pole=ended_at_pole)
