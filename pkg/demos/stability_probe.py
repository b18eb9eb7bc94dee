"""Stable and unstable branches of y' = -y**2 + x**2 - 1.

A small perturbation phi of a generic solution decays like
exp(-2 int y) near the upper branch y ~ +x.  On the separatrix
y = -x it grows instead: one side escapes up, the other hits a pole.
"""

from separatrix import IntegratorConfig, PotentialSpec, integrate_riccati, stability_probe

V = PotentialSpec((0.0, 0.0, 1.0))

p = stability_probe(V, 1.0, 0.5, 1e-4)
print(f"generic start: regime {p.regime.value}, phi({p.x[-1]:.1f}) = {p.phi[-1]:.3e}")

for delta in (1e-4, -1e-4):
    t = integrate_riccati(V, 1.0, delta, IntegratorConfig(x_max=8.0))
    first = f", first at x = {t.events[0].x0:.4f}" if t.events else ""
    print(f"y(0) = {delta:+.0e}: {t.pole_count} pole(s){first}, y(8) = {t.y[-1]:.4f}")
