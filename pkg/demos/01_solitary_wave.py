"""Solitary waves: pick the sign convention, then watch one travel.

Run: python3 demos/01_solitary_wave.py
"""

import numpy as np

from gdnls.evolution import EquationSpec, determine_mu_star, evolve
from gdnls.harness.config import format_mu
from gdnls.profiles import WaveParams, phase_integral, phase_integral_simpson, solitary_wave
from gdnls.spectral import Grid

# The explicit wave family solves the equation for exactly one unit mu.
rec = determine_mu_star()
print("residual of the stationary wave for each unit mu:")
for mu, r in rec.residuals.items():
    print(f"  mu = {format_mu(mu):>3}: {r:.2e}")
mu = complex(rec.mu_star)
print(f"selected mu* = {format_mu(rec.mu_star)}\n")

# The phase has a closed form; Simpson quadrature plus an analytic tail is the independent check.
wave = WaveParams(omega=1.0, c=1.0, alpha=1.0)
z = np.linspace(-30.0, 5.0, 3501)
quadrature = phase_integral_simpson(wave, z)
for x in (-5.0, 0.0, 3.0):
    j = int(np.argmin(abs(z - x)))
    print(f"phase({x:+.0f}): closed form {phase_integral(wave, x):.12f}, quadrature {quadrature[j]:.12f}")

# Evolve the moving wave for one time unit and compare with the exact translate.
grid = Grid(40.0, 4096)
u0 = solitary_wave(wave, grid)
traj = evolve(u0, 1.0, 1e-4, "ifrk4", EquationSpec(mu=mu), save_every=2000)
print("\n   t   relative L2 error   mass")
for t, u in zip(traj.times, traj):
    exact = solitary_wave(wave, grid, t=float(t))
    print(f"{t:4.1f}   {(u - exact).l2() / exact.l2():.3e}          {u.l2() ** 2:.12f}")
