"""Time-step convergence of both steppers by Richardson self-convergence.

Run: python3 demos/04_convergence.py
"""

from gdnls.diagnostics import loglog_slope
from gdnls.evolution import EquationSpec, GDNLSNonlinearity, march
from gdnls.profiles import WaveParams, solitary_wave
from gdnls.spectral import Grid

grid = Grid(40.0, 1024)
u0 = solitary_wave(WaveParams(1.0, 1.0, 1.0), grid)
nonlinear = GDNLSNonlinearity(grid, EquationSpec(mu=-1))
ladder = (4e-3, 2e-3, 1e-3, 5e-4)

for stepper in ("strang", "ifrk4"):
    finals = [march(u0, round(1 / dt), dt, nonlinear, stepper, save_every=None).final for dt in ladder]
    errs = [(a - b).l2() / finals[-1].l2() for a, b in zip(finals, finals[1:])]
    print(f"{stepper:6s} errors " + "  ".join(f"{e:.2e}" for e in errs)
          + f"   order {loglog_slope(ladder[:-1], errs):.3f}")
