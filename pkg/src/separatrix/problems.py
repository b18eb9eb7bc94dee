"""ODE families and the exact maps between them.

Four families are represented:

``Ince``
    ``W'' = -2 W W' + q W' + q' W`` for a polynomial ``q``.
``Master``
    ``y'' = -2 y' y + V'(x)``, obtained from Ince by ``y = W - q/2``.
``Riccati``
    ``y' = -y**2 + V(x) - E``, the first integral of the master equation.
``Extended``
    ``y'' = -((n+1)/n) y' y**n + sum_mk a_mk x**m y**k``.

Potentials are polynomials ``V(x) = sum_j c_j x**j``.  The additive constant
of ``V`` is a convention (it shifts ``E`` by the same amount), and
`ince_to_master` fixes it to zero.

All problem objects round-trip through plain dicts with the keys
``family``, ``V``, ``q``, ``E``, ``n`` and ``forcing``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = [
    "Extended",
    "EquationSpec",
    "FirstIntegral",
    "Ince",
    "Master",
    "PotentialSpec",
    "ProblemError",
    "Riccati",
    "SchrodingerProblem",
    "equation_from_dict",
    "equation_to_dict",
    "extended_first_integral",
    "ince_to_master",
    "master_to_riccati",
    "mirror",
    "rhs",
    "riccati_to_schrodinger",
]


class ProblemError(ValueError):
    """Malformed problem definition."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


def _trim(coefficients: Sequence[float]) -> tuple[float, ...]:
    c = [float(v) for v in coefficients]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c) if c else (0.0,)


def _horner(coefficients: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coefficients):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class PotentialSpec:
    """Polynomial potential ``V(x) = sum_j coefficients[j] * x**j``."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coefficients = _trim(self.coefficients)
        if not all(math.isfinite(c) for c in coefficients):
            raise ProblemError("potential coefficients must be finite", key="V")
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def monomial(cls, degree: int, scale: float = 1.0) -> "PotentialSpec":
        return cls((0.0,) * degree + (scale,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def derivative_coefficients(self) -> tuple[float, ...]:
        return _trim(P.polyder(self.coefficients)) if self.degree else (0.0,)

    @property
    def is_confining(self) -> bool:
        """True when ``V`` is unbounded above as ``x -> +inf``."""
        return self.degree >= 1 and self.coefficients[-1] > 0.0

    def require_confining(self) -> None:
        if not self.is_confining:
            raise ProblemError(
                "potential must have degree >= 1 and positive leading coefficient",
                key="V",
            )

    def __call__(self, x: float) -> float:
        return _horner(self.coefficients, x)

    def derivative(self, x: float) -> float:
        return _horner(self.derivative_coefficients, x)

    def shifted(self, constant: float) -> "PotentialSpec":
        c = list(self.coefficients)
        c[0] += constant
        return PotentialSpec(tuple(c))

    def last_crossing(self, level: float) -> float:
        """Smallest ``x0 >= 0`` with ``V(x) > level`` for every ``x > x0``."""
        self.require_confining()
        c = np.array(self.coefficients)
        c[0] -= level
        roots = P.polyroots(c)
        real = [r.real for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r))]
        return max([0.0] + real)


@dataclass(frozen=True)
class Ince:
    """``W'' = -2 W W' + q W' + q' W`` with polynomial ``q``."""

    q: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", _trim(self.q))


@dataclass(frozen=True)
class Master:
    """``y'' = -2 y' y + V'(x)``."""

    V: PotentialSpec


@dataclass(frozen=True)
class Riccati:
    """``y' = -y**2 + V(x) - E``."""

    V: PotentialSpec
    E: float


@dataclass(frozen=True)
class Extended:
    """``y'' = -((n+1)/n) y' y**n + sum a x**m y**k`` over ``forcing`` triples.

    ``n = 1`` is the master equation with ``V' = sum a x**m``; it is allowed
    so that the master form can be handled through the same code path.
    """

    n: int
    forcing: tuple[tuple[int, int, float], ...] = field(default=())

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ProblemError(f"extended exponent n must be a positive integer, got {self.n!r}", key="n")
        terms = []
        for term in self.forcing:
            if len(term) != 3:
                raise ProblemError(f"forcing term must be [m, k, a], got {term!r}", key="forcing")
            m, k, a = term
            if int(m) != m or int(k) != k or m < 0 or k < 0:
                raise ProblemError(f"forcing powers must be nonnegative integers, got {term!r}", key="forcing")
            if not math.isfinite(float(a)):
                raise ProblemError(f"forcing coefficient must be finite, got {term!r}", key="forcing")
            terms.append((int(m), int(k), float(a)))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "forcing", tuple(terms))

    def forcing_value(self, x: float, y: float) -> float:
        return sum(a * x**m * y**k for m, k, a in self.forcing)


EquationSpec = Union[Ince, Master, Riccati, Extended]


# -- transformations ---------------------------------------------------------


def ince_to_master(q: Sequence[float]) -> PotentialSpec:
    """Potential of the master equation obtained from ``y = W - q/2``.

    Returns ``V = q**2/4 - q'/2``, whose derivative is ``q' q / 2 - q''/2``.
    The integration constant is fixed to zero.
    """
    q = np.asarray(_trim(q), dtype=float)
    v = P.polysub(P.polymul(q, q) / 4.0, P.polyder(q) / 2.0 if len(q) > 1 else [0.0])
    return PotentialSpec(tuple(v))


def master_to_riccati(V: PotentialSpec, y0: float, yp0: float) -> float:
    """Riccati constant ``E = V(0) - y0**2 - yp0`` for master-equation data."""
    return V(0.0) - y0 * y0 - yp0


@dataclass(frozen=True)
class SchrodingerProblem:
    """``-psi'' + V psi = E psi`` on ``[0, inf)`` with ``psi'(0) = 0``.

    The outer condition keeps only the decaying solution at infinity.  The
    Riccati solution is recovered as ``y = psi'/psi``.
    """

    V: PotentialSpec
    E: float
    inner: str = "neumann"
    outer: str = "decaying"

    def rhs(self, x: float, psi: float, dpsi: float) -> tuple[float, float]:
        return dpsi, (self.V(x) - self.E) * psi


def riccati_to_schrodinger(V: PotentialSpec, E: float) -> SchrodingerProblem:
    return SchrodingerProblem(V=V, E=float(E))


@dataclass(frozen=True)
class FirstIntegral:
    """``y' = -y**(n+1)/n + F(x) - E`` with polynomial ``F`` (``F(0) = 0``)."""

    n: int
    F: tuple[float, ...]

    def constant(self, y0: float, yp0: float) -> float:
        return _horner(self.F, 0.0) - yp0 - y0 ** (self.n + 1) / self.n

    def slope(self, x: float, y: float, E: float) -> float:
        return -(y ** (self.n + 1)) / self.n + _horner(self.F, x) - E

    def as_riccati(self, E: float) -> Riccati:
        if self.n != 1:
            raise ProblemError("only n = 1 first integrals are Riccati equations", key="n")
        return Riccati(PotentialSpec(self.F), E)


def extended_first_integral(spec: Extended) -> FirstIntegral | None:
    """First-order form of an extended equation, or None if not reducible.

    Reduction works when no forcing term depends on ``y`` (all ``k = 0``):
    then ``y' + y**(n+1)/n`` has derivative ``sum a x**m`` and integrates to a
    polynomial ``F(x)`` plus a constant.
    """
    if any(k != 0 for _, k, _ in spec.forcing):
        return None
    deg = max((m for m, _, _ in spec.forcing), default=0)
    g = np.zeros(deg + 1)
    for m, _, a in spec.forcing:
        g[m] += a
    F = P.polyint(g)
    return FirstIntegral(n=spec.n, F=_trim(F))


def extended_from_master(V: PotentialSpec) -> Extended:
    """Master equation written as the ``n = 1`` extended equation."""
    dv = V.derivative_coefficients
    return Extended(1, tuple((m, 0, a) for m, a in enumerate(dv) if a != 0.0))


def mirror(spec: Extended) -> Extended:
    """Equation satisfied by ``z(x) = -y(-x)`` for odd exponent ``n``.

    Each forcing term picks up the sign ``(-1)**(m+k+1)``.  The initial data
    map as ``z(0) = -y(0)``, ``z'(0) = y'(0)``, so with ``y(0) = 0`` the
    initial-slope spectrum of ``mirror(spec)`` on ``x > 0`` is the spectrum of
    `spec` on ``x < 0``.
    """
    if spec.n % 2 == 0:
        raise ProblemError("mirror needs an odd exponent n", key="n")
    return Extended(spec.n, tuple((m, k, a if (m + k) % 2 else -a) for m, k, a in spec.forcing))


def master_potential(spec: EquationSpec) -> PotentialSpec:
    """Potential ``V`` of a Riccati-reducible problem."""
    if isinstance(spec, (Master, Riccati)):
        return spec.V
    if isinstance(spec, Ince):
        return ince_to_master(spec.q)
    if isinstance(spec, Extended):
        fi = extended_first_integral(spec)
        if spec.n == 1 and fi is not None:
            return PotentialSpec(fi.F)
    raise ProblemError(f"{type(spec).__name__} problem is not Riccati-reducible", key="family")


# -- right-hand sides --------------------------------------------------------


def rhs(spec: EquationSpec) -> Callable[[float, tuple[float, ...]], tuple[float, ...]]:
    """State derivative ``f(x, state)`` for a problem.

    Riccati problems have state ``(y,)``; all others ``(y, y')``.  For Ince
    problems the state is ``(W, W')``.
    """
    if isinstance(spec, Riccati):
        c = spec.V.coefficients
        E = spec.E

        def f(x, s):
            return (-s[0] * s[0] + _horner(c, x) - E,)

        return f
    if isinstance(spec, Master):
        dv = spec.V.derivative_coefficients

        def f(x, s):
            return (s[1], -2.0 * s[1] * s[0] + _horner(dv, x))

        return f
    if isinstance(spec, Ince):
        q = spec.q
        dq = _trim(P.polyder(q)) if len(q) > 1 else (0.0,)

        def f(x, s):
            w, dw = s
            return (dw, -2.0 * w * dw + _horner(q, x) * dw + _horner(dq, x) * w)

        return f
    if isinstance(spec, Extended):
        n = spec.n
        coef = (n + 1) / n
        forcing = spec.forcing

        def f(x, s):
            y, dy = s
            return (dy, -coef * dy * y**n + sum(a * x**m * y**k for m, k, a in forcing))

        return f
    raise TypeError(f"unknown equation family {type(spec).__name__}")


# -- serialization -----------------------------------------------------------

_FAMILIES = ("ince", "master", "riccati", "extended")


def _require(doc: Mapping[str, Any], key: str) -> Any:
    if key not in doc:
        raise ProblemError(f"missing required key {key!r}", key=key)
    return doc[key]


def _number_list(value: Any, key: str) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ProblemError(f"{key!r} must be a nonempty list of numbers", key=key)
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ProblemError(f"{key!r} must be a nonempty list of numbers", key=key) from None


def equation_from_dict(doc: Mapping[str, Any]) -> EquationSpec:
    """Build a problem from its JSON document."""
    if not isinstance(doc, Mapping):
        raise ProblemError("problem must be a JSON object", key="problem")
    family = _require(doc, "family")
    if family not in _FAMILIES:
        raise ProblemError(f"unknown family {family!r}; expected one of {_FAMILIES}", key="family")
    if family == "ince":
        return Ince(_number_list(_require(doc, "q"), "q"))
    if family == "extended":
        forcing = _require(doc, "forcing")
        if not isinstance(forcing, (list, tuple)):
            raise ProblemError("'forcing' must be a list of [m, k, a] triples", key="forcing")
        return Extended(_require(doc, "n"), tuple(tuple(t) for t in forcing))
    V = PotentialSpec(_number_list(_require(doc, "V"), "V"))
    if family == "master":
        return Master(V)
    E = _require(doc, "E")
    if not isinstance(E, (int, float)):
        raise ProblemError("'E' must be a number", key="E")
    return Riccati(V, float(E))


def equation_to_dict(spec: EquationSpec) -> dict[str, Any]:
    if isinstance(spec, Ince):
        return {"family": "ince", "q": list(spec.q)}
    if isinstance(spec, Master):
        return {"family": "master", "V": list(spec.V.coefficients)}
    if isinstance(spec, Riccati):
        return {"family": "riccati", "V": list(spec.V.coefficients), "E": spec.E}
    if isinstance(spec, Extended):
        return {"family": "extended", "n": spec.n, "forcing": [list(t) for t in spec.forcing]}
    raise TypeError(f"unknown equation family {type(spec).__name__}")
