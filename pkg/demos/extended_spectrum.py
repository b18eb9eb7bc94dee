"""Spectrum of the cubic equation y'' = -(4/3) y' y**3 + x.

This equation has no linear counterpart.  Its separatrices end on
y ~ x**(1/3) and the trajectories between them cross cube-root
singularities, one more per level.
"""

from separatrix import Extended, IntegratorConfig, integrate_extended, nonlinear_spectrum

eq = Extended(3, ((1, 0, 1.0),))
records = nonlinear_spectrum(eq, 5, (0.0, -12.0), slope_tol=1e-8)
for rec in records:
    print(f"n={rec.n}  y'(0)={rec.slope:.6f}  singularities in bracket {rec.pole_counts}")

# a trajectory just below the third separatrix, with its singularities
traj = integrate_extended(eq, 0.0, records[2].slope - 0.05, IntegratorConfig(x_max=20.0))
for ev in traj.events:
    print(f"  {ev.kind.value} at x = {ev.x0:.6f}")
