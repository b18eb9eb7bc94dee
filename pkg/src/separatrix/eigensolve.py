"""Nonlinear initial-slope spectra and the linear Schrödinger counterpart.

The nonlinear eigenvalue ``y_n'(0)`` is the initial slope at which the
singularity count of the solution steps from ``n`` to ``n + 1``.  It is
found by scanning the slope window, refining every step of the count to
unit height, and bisecting each unit step.

For Riccati-reducible problems the same numbers follow from
``-psi'' + V psi = E psi`` with ``psi'(0) = 0`` and ``psi`` decaying:
``y_n'(0) = V(0) - E_n``.  `linear_spectrum` solves that problem
independently with Numerov shooting and node counting.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .classify import Classification, classify
from .integrate import IntegratorConfig, integrate_extended, integrate_riccati
from .problems import (
    EquationSpec,
    Extended,
    Ince,
    Master,
    PotentialSpec,
    ProblemError,
    Riccati,
    extended_first_integral,
    master_potential,
)

__all__ = [
    "BracketNotFound",
    "DomainTooSmall",
    "EigenvalueRecord",
    "LinearLevel",
    "Unresolved",
    "initial_function_scan",
    "linear_spectrum",
    "master_initial_data",
    "node_count",
    "nonlinear_spectrum",
    "numerov_neumann",
    "shooting_classifier",
    "verify_equivalence",
]


class BracketNotFound(RuntimeError):
    def __init__(self, n: int, detail: str = ""):
        super().__init__(f"no bracket found for level {n}" + (f": {detail}" if detail else ""))
        self.n = n


class DomainTooSmall(RuntimeError):
    pass


class Unresolved(RuntimeError):
    """A trial inside a bracket stayed unclassified after extending x_max."""


@dataclass
class EigenvalueRecord:
    n: int
    slope: float
    implied_energy: float | None
    bracket_width: float
    pole_counts: tuple[int, int]
    residual: float | None = None
    bracket: tuple[float, float] = field(default=(math.nan, math.nan), repr=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "slope": self.slope,
            "implied_energy": self.implied_energy,
            "bracket_width": self.bracket_width,
            "pole_counts": list(self.pole_counts),
            "residual": self.residual,
            "bracket": list(self.bracket),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EigenvalueRecord":
        return cls(
            n=int(doc["n"]),
            slope=float(doc["slope"]),
            implied_energy=None if doc.get("implied_energy") is None else float(doc["implied_energy"]),
            bracket_width=float(doc.get("bracket_width", math.nan)),
            pole_counts=tuple(doc.get("pole_counts", (doc["n"], doc["n"] + 1))),
            residual=None if doc.get("residual") is None else float(doc["residual"]),
            bracket=tuple(doc.get("bracket", (math.nan, math.nan))),
        )


@dataclass(frozen=True)
class LinearLevel:
    n: int
    energy: float
    nodes: int
    # sign of psi(L) just below the level; the decaying solution sits where it flips
    outer_amplitude_sign: int
    richardson_error: float = math.nan


# -- nonlinear shooting --------------------------------------------------------


def _reducible_potential(eq: EquationSpec) -> PotentialSpec | None:
    try:
        return master_potential(eq)
    except ProblemError:
        return None


def master_initial_data(eq: EquationSpec, y0: float, slope: float) -> tuple[float, float]:
    """Initial data of the master-equation variable for a reducible problem.

    Ince problems are posed for ``W = y + q/2``; the other families already
    use ``y``.
    """
    if isinstance(eq, Ince):
        q = PotentialSpec(eq.q)
        return y0 - 0.5 * q(0.0), slope - 0.5 * q.derivative(0.0)
    return y0, slope


def shooting_classifier(
    eq: EquationSpec, cfg: IntegratorConfig, y0: float = 0.0, branch_tol: float = 1e-2
) -> Callable[[float], Classification]:
    """Map an initial slope to the classification of its trajectory.

    Riccati-reducible problems (Master, Ince, Riccati, or extended with
    ``n = 1`` and y-free forcing) run through `integrate_riccati` with
    ``E = V(0) - y0**2 - slope``; other extended problems through
    `integrate_extended`.
    """
    V = _reducible_potential(eq)
    if V is not None:
        V.require_confining()

        def run(slope: float) -> Classification:
            ym, sm = master_initial_data(eq, y0, slope)
            E = V(0.0) - ym * ym - sm
            return classify(integrate_riccati(V, E, ym, cfg), V, E, branch_tol)

        return run
    if isinstance(eq, Extended):

        def run(slope: float) -> Classification:
            return classify(integrate_extended(eq, y0, slope, cfg), branch_tol=branch_tol, n=eq.n)

        return run
    raise ProblemError(f"cannot shoot on {type(eq).__name__} problems", key="family")


def _settles(eq: EquationSpec) -> bool:
    """Whether runs of this problem can end inside a provable capture region."""
    if isinstance(eq, Extended) and _reducible_potential(eq) is None:
        return all(a >= 0.0 for _, _, a in eq.forcing)
    return True


def _implied_energy(eq: EquationSpec, slope: float, y0: float) -> float | None:
    V = _reducible_potential(eq)
    if V is not None:
        ym, sm = master_initial_data(eq, y0, slope)
        return V(0.0) - ym * ym - sm
    if isinstance(eq, Extended):
        fi = extended_first_integral(eq)
        if fi is not None:
            return fi.constant(y0, slope)
    return None


def nonlinear_spectrum(
    eq: EquationSpec,
    n_max: int,
    slope_range: tuple[float, float],
    cfg: IntegratorConfig | None = None,
    slope_tol: float = 1e-9,
    *,
    y0: float = 0.0,
    scan_points: int = 64,
    max_refine_depth: int = 30,
    branch_tol: float = 1e-2,
) -> list[EigenvalueRecord]:
    """Initial slopes ``y_n'(0)``, ``n = 0..n_max``, producing separatrices.

    Parameters
    ----------
    eq : EquationSpec
        Master, Ince or Extended problem.
    n_max : int
        Highest level to return.
    slope_range : (float, float)
        Window of initial slopes to scan; must contain ``n_max + 1`` steps
        of the singularity count.
    cfg : IntegratorConfig, optional
        Defaults to ``x_max = 12`` for Riccati-reducible problems and
        ``x_max = 20`` otherwise, with early stop on capture.
    slope_tol : float
        Final bracket width.
    scan_points : int
        Points of the initial uniform scan.  Intervals whose count jumps by
        more than one are split until every step has unit height.

    Raises
    ------
    BracketNotFound
        If some level ``n <= n_max`` has no bracket in the window.
    Unresolved
        If a bisection trial stays unsettled even with a longer window.
    """
    if cfg is None:
        x_max = 12.0 if _reducible_potential(eq) is not None else 20.0
        cfg = IntegratorConfig(x_max=x_max)
    cfg = cfg.with_(stop_on_capture=True)
    settles = _settles(eq)
    runners = {cfg.x_max: shooting_classifier(eq, cfg, y0, branch_tol)}
    long_x = cfg.x_max * 1.5
    cache: dict[float, int] = {}

    def count(slope: float, require_settled: bool = False) -> int:
        if slope in cache:
            return cache[slope]
        c = runners[cfg.x_max](slope)
        if settles and not c.settled and require_settled:
            if long_x not in runners:
                runners[long_x] = shooting_classifier(eq, cfg.with_(x_max=long_x), y0, branch_tol)
            c = runners[long_x](slope)
            if not c.settled:
                raise Unresolved(f"trajectory with slope {slope!r} unsettled at x_max={long_x:g}")
        cache[slope] = c.pole_count
        return c.pole_count

    hi, lo = max(slope_range), min(slope_range)
    grid = np.linspace(hi, lo, scan_points)
    counts = [count(float(s)) for s in grid]

    brackets: dict[int, tuple[float, float]] = {}

    def refine(a: float, ca: int, b: float, cb: int, depth: int) -> None:
        # a is the less negative slope, ca <= cb by monotonicity
        if cb <= ca:
            return
        if cb == ca + 1:
            brackets.setdefault(ca, (a, b))
            return
        if depth >= max_refine_depth:
            return
        m = 0.5 * (a + b)
        cm = count(m)
        refine(a, ca, m, cm, depth + 1)
        refine(m, cm, b, cb, depth + 1)

    for i in range(len(grid) - 1):
        refine(float(grid[i]), counts[i], float(grid[i + 1]), counts[i + 1], 0)

    records = []
    for n in range(n_max + 1):
        if n not in brackets:
            raise BracketNotFound(
                n, f"scan of [{lo:g}, {hi:g}] saw counts {counts[0]}..{counts[-1]}"
            )
        a, b = brackets[n]
        while abs(a - b) > slope_tol:
            m = 0.5 * (a + b)
            if m == a or m == b:
                break
            if count(m, require_settled=True) <= n:
                a = m
            else:
                b = m
        slope = 0.5 * (a + b)
        records.append(
            EigenvalueRecord(
                n=n,
                slope=slope,
                implied_energy=_implied_energy(eq, slope, y0),
                bracket_width=abs(a - b),
                pole_counts=(n, n + 1),
                bracket=(a, b),
            )
        )
    return records


# -- linear side -----------------------------------------------------------------


def numerov_neumann(V: PotentialSpec, E: float, L: float, grid_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``psi'' = (V - E) psi`` on ``[0, L]`` with ``psi(0)=1, psi'(0)=0``.

    The first step uses the Taylor expansion of the solution through
    ``h**5``; the rest is the Numerov recurrence on a uniform grid.
    """
    x = np.linspace(0.0, L, grid_points + 1)
    h = x[1] - x[0]
    q = np.polynomial.polynomial.polyval(x, V.coefficients) - E
    c = V.coefficients + (0.0, 0.0, 0.0)
    v0, v1, v2, v3 = c[0] - E, c[1], 2.0 * c[2], 6.0 * c[3]
    psi1 = (
        1.0
        + h**2 / 2.0 * v0
        + h**3 / 6.0 * v1
        + h**4 / 24.0 * (v2 + v0 * v0)
        + h**5 / 120.0 * (v3 + 4.0 * v1 * v0)
    )
    k = h * h / 12.0
    a = (2.0 + 10.0 * k * q).tolist()
    b = (1.0 - k * q).tolist()
    psi = [1.0, psi1]
    p_prev, p = 1.0, psi1
    for i in range(1, grid_points):
        p_next = (a[i] * p - b[i - 1] * p_prev) / b[i + 1]
        if abs(p_next) > 1e250:
            psi = [v * 1e-250 for v in psi]
            p, p_next = p * 1e-250, p_next * 1e-250
        psi.append(p_next)
        p_prev, p = p, p_next
    return x, np.array(psi)


def node_count(psi: np.ndarray) -> int:
    """Sign changes of `psi` on the open interval (exact zeros counted once)."""
    s = np.sign(psi)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def linear_spectrum(
    V: PotentialSpec,
    n_max: int,
    L: float,
    grid_points: int = 40000,
    energy_tol: float = 1e-12,
    *,
    richardson: bool = False,
) -> list[LinearLevel]:
    """First ``n_max + 1`` levels of ``-psi'' + V psi = E psi``, ``psi'(0)=0``.

    Levels are bracketed by bisection on the node count of the Numerov
    solution on ``(0, L)`` and refined on the sign of ``psi(L)``.  The
    search window tops out at ``V(L) - 25`` so that every returned level
    is deep below the potential at the cut.

    With `richardson` each level is recomputed at half the grid and the
    difference is stored as an error estimate.
    """
    V.require_confining()
    e_top = V(L) - 25.0
    xs = np.linspace(0.0, L, 2001)
    e_bottom = float(np.min(np.polynomial.polynomial.polyval(xs, V.coefficients))) - 1.0

    def nodes(E: float, pts: int = grid_points) -> int:
        return node_count(numerov_neumann(V, E, L, pts)[1])

    def tail(E: float, pts: int = grid_points) -> float:
        psi = numerov_neumann(V, E, L, pts)[1]
        return float(psi[-1] / np.max(np.abs(psi)))

    if e_top <= e_bottom or nodes(e_top) < n_max + 1:
        raise DomainTooSmall(
            f"only {nodes(e_top) if e_top > e_bottom else 0} levels below V(L)-25={e_top:g}; "
            f"increase L beyond {L:g}"
        )

    def level(n: int, pts: int) -> float:
        a, b = e_bottom, e_top
        # bracket the step n -> n+1 of the node count
        while b - a > 1e-3 * max(1.0, abs(b)):
            m = 0.5 * (a + b)
            if nodes(m, pts) <= n:
                a = m
            else:
                b = m
        if nodes(a, pts) != n or nodes(b, pts) != n + 1:
            raise DomainTooSmall(f"node count is not monotone near level {n}")
        return brentq(lambda e: tail(e, pts), a, b, xtol=energy_tol, rtol=4 * np.finfo(float).eps)

    out = []
    for n in range(n_max + 1):
        E = level(n, grid_points)
        err = abs(E - level(n, grid_points // 2)) if richardson else math.nan
        sign = int(np.sign(tail(E - 10 * energy_tol))) or 1
        out.append(LinearLevel(n=n, energy=E, nodes=n, outer_amplitude_sign=sign, richardson_error=err))
    return out


def verify_equivalence(
    eq: EquationSpec,
    n_max: int,
    slope_range: tuple[float, float] | None = None,
    cfg: IntegratorConfig | None = None,
    slope_tol: float = 1e-9,
    L: float | None = None,
    grid_points: int = 40000,
    energy_tol: float = 1e-12,
) -> list[EigenvalueRecord]:
    """Pair nonlinear slopes with ``V(0) - E_n`` from the linear solver.

    Each returned record carries ``residual = |slope_n - (V(0) - E_n)|``.
    """
    V = _reducible_potential(eq)
    if V is None:
        raise ProblemError("equivalence needs a Riccati-reducible problem", key="family")
    if L is None:
        L = _default_length(V, n_max)
    levels = linear_spectrum(V, n_max, L, grid_points, energy_tol)
    if slope_range is None:
        top = V(0.0) - levels[-1].energy
        bottom = V(0.0) - levels[0].energy
        span = bottom - top
        slope_range = (bottom + 0.1 * span + 1.0, top - 0.1 * span - 1.0)
    records = nonlinear_spectrum(eq, n_max, slope_range, cfg, slope_tol)
    for rec, lev in zip(records, levels):
        rec.residual = abs(rec.slope - (V(0.0) - lev.energy))
    return records


def _default_length(V: PotentialSpec, n_max: int) -> float:
    """Smallest L on a 0.5 grid that keeps V(L) - E above 25 for a rough E_max."""
    L = 4.0
    guess = 0.0
    while True:
        try:
            levels = linear_spectrum(V, n_max, L, 4000, 1e-6)
            guess = levels[-1].energy
            if V(L) - guess >= 25.0 + 10.0:
                return max(L + 2.0, 8.0)
        except DomainTooSmall:
            pass
        L += 0.5
        if L > 200:
            raise DomainTooSmall(f"no workable L below 200 (last level guess {guess:g})")


def initial_function_scan(
    V: PotentialSpec,
    y0_range: tuple[float, float],
    grid: int,
    cfg: IntegratorConfig = IntegratorConfig(),
    slope: float = 0.0,
) -> list[tuple[tuple[float, int], tuple[float, int]]]:
    """Brackets of the initial-function problem at fixed ``y'(0)``.

    Each grid value ``c`` of ``y(0)`` runs the Riccati equation with
    ``E = V(0) - c**2 - slope``.  Every adjacent pair whose pole counts
    differ is returned as ``((c_a, count_a), (c_b, count_b))``; an empty list
    means no eigenvalue in the range.
    """
    cs = np.linspace(min(y0_range), max(y0_range), grid)
    counts = []
    for c in cs:
        E = V(0.0) - c * c - slope
        counts.append(integrate_riccati(V, E, float(c), cfg).pole_count)
    return [
        ((float(cs[i]), counts[i]), (float(cs[i + 1]), counts[i + 1]))
        for i in range(grid - 1)
        if counts[i] != counts[i + 1]
    ]
