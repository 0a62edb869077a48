import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gdnls.spectral import Field, Grid

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: dict = {}


def band_limited(grid: Grid, seed: int, kmax: int | None = None) -> Field:
    """Random field whose modes vanish above |k| = kmax (default N/4)."""
    rng = np.random.default_rng(seed)
    kmax = grid.N // 4 if kmax is None else kmax
    k = np.fft.fftfreq(grid.N, 1.0 / grid.N)
    coeffs = (rng.normal(size=grid.N) + 1j * rng.normal(size=grid.N)) * (np.abs(k) <= kmax)
    return Field.from_hat(grid, coeffs / grid.N)


@pytest.fixture
def small_grid():
    return Grid(np.pi, 64)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
