"""Exact separatrices of y'' = -2 y' y + 2x.

For V = x**2 the n-th separatrix starts with slope -(4n + 1).  We shoot
for the first few slopes numerically and compare with the closed form.
"""

from separatrix import Master, PotentialSpec, exact_solution, nonlinear_spectrum

V = PotentialSpec((0.0, 0.0, 1.0))
records = nonlinear_spectrum(Master(V), 5, (0.0, -25.0))

print(" n     shooting        exact    |error|")
for rec in records:
    exact = exact_solution(rec.n).slope_at_origin
    print(f"{rec.n:2d} {rec.slope:12.9f} {exact:12.1f} {abs(rec.slope - exact):10.2e}")
