"""Large-n growth of a separatrix spectrum.

Slopes of y'' = -(4/3) y' y**3 + x are fitted to c n**p (1 + d/n).
Plain log-log least squares is shown for comparison; it absorbs the
1/n drift into p and c.
"""

from separatrix import Extended, fit_power_law, nonlinear_spectrum

records = nonlinear_spectrum(Extended(3, ((1, 0, 1.0),)), 14, (0.0, -20.0), slope_tol=1e-8)
for model in ("corrected", "ols"):
    fit = fit_power_law(records, n_min=7, model=model)
    print(f"{model:9s} p = {fit.p:.4f} +- {fit.stderr_p:.4f}   c = {fit.c:.4f}")
