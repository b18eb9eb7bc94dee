"""Closed-form machinery for the harmonic potential ``V(x) = x**2``.

The Riccati equation ``y' = -y**2 + x**2 - E`` is solved exactly by the
logarithmic derivative of a parabolic cylinder function.  Only a few pieces of
that solution are needed here:

* the Gamma function, for the Riccati initial data at ``x = 0``;
* ratios of consecutive Hermite polynomials, which give the separatrix
  solutions ``y_n(x) = -x + 4n H_{2n-1}(x) / H_{2n}(x)``;
* the quantized energies ``E = 4n + 1`` and slopes ``y_n'(0) = -4n - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ExactHarmonicSolution",
    "GammaPoleError",
    "HermiteRatioOverflow",
    "exact_eigenfunction",
    "exact_solution",
    "gamma",
    "gamma_ratio",
    "hermite_ratio",
    "riccati_initial_data",
]


class GammaPoleError(ValueError):
    """Raised when Gamma is evaluated at a nonpositive integer."""


class HermiteRatioOverflow(ArithmeticError):
    """Raised when ``H_m(x)`` is too small relative to ``H_{m-1}(x)``."""


# Lanczos approximation, g = 7, nine terms (Godfrey's coefficient set).
# Relative error is a few ulp for moderate arguments and grows to about
# 1e-13 near the overflow limit x ~ 171, from rounding in exp and pow.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _is_gamma_pole(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Uses the Lanczos approximation for ``x >= 0.5`` and the reflection formula
    ``Gamma(x) Gamma(1 - x) = pi / sin(pi x)`` below that.

    Raises
    ------
    GammaPoleError
        If `x` is zero or a negative integer.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"gamma requires a finite argument, got {x!r}")
    if _is_gamma_pole(x):
        raise GammaPoleError(f"Gamma has a pole at {x:g}")
    if x < 0.5:
        # sin(pi x) = (-1)**k sin(pi (x - k)) with k the nearest integer,
        # accurate near the poles and for large |x|
        k = round(x)
        s = math.sin(math.pi * (x - k))
        if k % 2:
            s = -s
        return math.pi / (s * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    # t**(z+0.5) overflows near x ~ 143; split the power
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * acc


def gamma_ratio(a: float, b: float) -> float:
    """Return ``Gamma(a) / Gamma(b)`` with poles resolved as limits.

    A pole in the denominator alone gives 0.  A pole in the numerator alone
    raises `GammaPoleError`.  When both are poles the ratio of the residues
    is returned, which is finite.
    """
    pa, pb = _is_gamma_pole(a), _is_gamma_pole(b)
    if pb and not pa:
        return 0.0
    if pa and not pb:
        raise GammaPoleError(f"Gamma({a:g}) / Gamma({b:g}) diverges")
    if pa and pb:
        # residue of Gamma at -k is (-1)**k / k!
        ka, kb = int(-a), int(-b)
        sign = -1.0 if (ka - kb) % 2 else 1.0
        return sign * math.exp(math.lgamma(kb + 1) - math.lgamma(ka + 1))
    return gamma(a) / gamma(b)


def hermite_ratio(m: int, x: float, guard: float = 1e-300) -> float:
    """Ratio ``H_{m-1}(x) / H_m(x)`` of physicists' Hermite polynomials.

    Built from ``r_1 = 1 / (2x)`` and ``r_{k+1} = 1 / (2x - 2k r_k)``, which
    follows from ``H_{k+1} = 2x H_k - 2k H_{k-1}``.  The polynomials
    themselves are never formed, so the ratio stays finite for large `m`.

    Parameters
    ----------
    m : int
        Degree of the denominator polynomial, ``m >= 1``.
    x : float
        Evaluation point.
    guard : float
        Denominators with magnitude below this are treated as a zero of
        ``H_k``.

    Raises
    ------
    HermiteRatioOverflow
        If the final denominator vanishes to within `guard`.
    """
    if m < 1:
        raise ValueError(f"hermite_ratio needs m >= 1, got {m}")
    x = float(x)
    # r_k = inf at a zero of H_k; the next step then gives r_{k+1} = 0 exactly.
    r = math.inf
    for k in range(1, m + 1):
        if k == 1:
            den = 2.0 * x
        elif math.isinf(r):
            r = 0.0
            continue
        else:
            den = 2.0 * x - 2.0 * (k - 1) * r
        if abs(den) <= guard:
            if k == m:
                raise HermiteRatioOverflow(
                    f"H_{m}({x!r}) vanishes relative to H_{m - 1}({x!r})"
                )
            r = math.inf
        else:
            r = 1.0 / den
    return r


@dataclass(frozen=True)
class ExactHarmonicSolution:
    """Quantized data of the n-th separatrix for ``V(x) = x**2``."""

    n: int
    nu: float
    energy: float
    slope_at_origin: float


def exact_solution(n: int) -> ExactHarmonicSolution:
    """Return the exact level ``n``: ``nu = 2n``, ``E = 4n + 1``, slope ``-E``."""
    if n < 0:
        raise ValueError(f"level index must be nonnegative, got {n}")
    nu = 2.0 * n
    energy = 2.0 * nu + 1.0
    return ExactHarmonicSolution(n=n, nu=nu, energy=energy, slope_at_origin=-energy)


def exact_eigenfunction(n: int, x: float) -> float:
    """Separatrix solution ``y_n(x) = -x + 4n H_{2n-1}(x) / H_{2n}(x)``.

    Diverges at the positive zeros of ``H_{2n}`` (simple poles of residue 1).
    """
    if n < 0:
        raise ValueError(f"level index must be nonnegative, got {n}")
    if n == 0:
        return -float(x)
    return -float(x) + 4.0 * n * hermite_ratio(2 * n, x)


def riccati_initial_data(nu: float) -> tuple[float, float]:
    """Initial data ``(y(0), y'(0))`` of ``y = D_nu'/D_nu`` for ``V = x**2``.

    ``y(0) = -2 Gamma(1/2 - nu/2) / Gamma(-nu/2)`` and
    ``y'(0) = -2 nu - 1 - y(0)**2``.  Here ``D_nu`` is taken at ``sqrt(2) x``
    so that ``E = 2 nu + 1``.  At ``nu = 0, 2, 4, ...`` the
    denominator has a pole and ``y(0) = 0``.  At ``nu = 1, 3, 5, ...`` the
    numerator has the pole and ``D_nu(0) = 0``; the solution then has a
    pole of residue 1 at the origin and ``(inf, -inf)`` is returned, the
    values approached from ``x > 0``.
    """
    nu = float(nu)
    a = 0.5 - 0.5 * nu
    b = -0.5 * nu
    if _is_gamma_pole(a) and not _is_gamma_pole(b):
        return math.inf, -math.inf
    y0 = -2.0 * gamma_ratio(a, b)
    return y0, -2.0 * nu - 1.0 - y0 * y0
