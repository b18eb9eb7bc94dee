"""The xy-forced cubic equation and its mirror image.

z(x) = -y(-x) maps y'' = -(4/3) y' y**3 + x y on x < 0 to the same
equation with forcing -x y on x > 0.  The latter is what we shoot on.
"""

from separatrix import Extended, mirror, nonlinear_spectrum

printed = Extended(3, ((1, 1, 1.0),))
flipped = mirror(printed)
print("mirrored forcing (m, k, coefficient):", flipped.forcing)

for rec in nonlinear_spectrum(flipped, 4, (0.0, -2.5), slope_tol=1e-8):
    print(f"n={rec.n}  y'(0)={rec.slope:.6f}")
