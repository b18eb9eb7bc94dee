"""Quartic separatrix slopes against the linear Numerov spectrum.

The slope y'(0) of the n-th separatrix of y'' = -2 y' y + 4 x**3 equals
-E_n, where E_n is the n-th Neumann level of -psi'' + x**4 psi = E psi.
Both sides are computed independently here.
"""

from separatrix import Master, PotentialSpec, linear_spectrum, nonlinear_spectrum

V = PotentialSpec((0.0, 0.0, 0.0, 0.0, 1.0))
shoot = nonlinear_spectrum(Master(V), 4, (0.0, -40.0))
levels = linear_spectrum(V, 4, 6.0, 20000, richardson=True)

print(" n    y'(0) shooting    -E_n (Numerov)    difference")
for rec, lv in zip(shoot, levels):
    print(f"{rec.n:2d} {rec.slope:16.10f} {-lv.energy:16.10f} {rec.slope + lv.energy:12.2e}")
