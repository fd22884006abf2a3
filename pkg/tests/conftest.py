"""Shared fixtures: grids, targets, and smooth random admissible states."""
import numpy as np
import pytest

from gpsol import Grid, PairState
from gpsol.state import ConstraintTargets, pin_boundary


@pytest.fixture(scope="session")
def grid_default():
    """The default production grid: L=40, h=0.01."""
    return Grid(40.0, 8001)


@pytest.fixture(scope="session")
def grid_coarse():
    """Fast grid for property runs: L=20, h=0.05."""
    return Grid(20.0, 801)


@pytest.fixture()
def targets():
    return ConstraintTargets(q=0.3, m=0.2, alpha=1.0, beta=1.0)


def gaussians(rng, x, n_lo, n_hi, amp_lo, amp_hi, spread=0.5,
              width=(0.8, 3.0)):
    out = np.zeros_like(x)
    half = spread * (x[-1] - x[0]) / 2.0
    for _ in range(rng.integers(n_lo, n_hi)):
        c = rng.uniform(-half, half)
        w = rng.uniform(*width)
        out += rng.uniform(amp_lo, amp_hi) * np.exp(-((x - c) / w) ** 2)
    return out


def random_valid_state(rng, grid, with_v=True, signed_phi=False):
    """Smooth admissible state built from continuum bump parameters.

    Using continuum parameters means the same draw can be sampled on grids
    of different resolution, which the O(h) calibration tests rely on.
    """
    x = grid.x
    rho = np.clip(1.0 - gaussians(rng, x, 1, 4, 0.05, 0.4), 0.05, 1.95)
    phi = gaussians(rng, x, 1, 4, 0.05, 0.6)
    if signed_phi:
        phi -= gaussians(rng, x, 1, 3, 0.02, 0.3)
    v = gaussians(rng, x, 1, 3, 0.05, 0.5, spread=0.4) if with_v else np.zeros_like(x)
    pin_boundary(rho, phi, v)
    return PairState.from_arrays(rho, phi, v, grid)


def random_direction(rng, grid):
    """Smooth direction vanishing at the boundary nodes."""
    d = gaussians(rng, grid.x, 1, 4, -0.5, 0.5, spread=0.7)
    d[0] = d[-1] = 0.0
    return d


def gradient_fd_relative_error(state, t, rng, step=1e-5):
    """Worst relative error of the analytic gradient against central
    differences of the energy along one random direction triple."""
    from gpsol import energy, energy_gradient, PairState
    from gpsol.grid import _integrate_values

    g = state.grid
    d_rho = random_direction(rng, g)
    d_phi = random_direction(rng, g)
    d_v = random_direction(rng, g)
    g_rho, g_phi, g_v = energy_gradient(state, t)
    analytic = (_integrate_values(g_rho.values * d_rho, g.h)
                + _integrate_values(g_phi.values * d_phi, g.h)
                + _integrate_values(g_v.values * d_v, g.h))

    def shifted(sign):
        return PairState.from_arrays(state.rho.values + sign * step * d_rho,
                                     state.phi.values + sign * step * d_phi,
                                     state.v.values + sign * step * d_v, g)

    fd = (energy(shifted(+1), t) - energy(shifted(-1), t)) / (2 * step)
    return abs(fd - analytic) / max(abs(fd), 1e-30)


def momentum_closed_form(c):
    """Independent closed form of the soliton momentum, derived by direct
    integration of (c/4) * (1-rho^2)^2 / rho^2 with the explicit profile:

        q(c) = pi/2 - arctan(c / sqrt(2 - c^2)) - (c/2) sqrt(2 - c^2).
    """
    return np.pi / 2 - np.arctan(c / np.sqrt(2.0 - c * c)) \
        - 0.5 * c * np.sqrt(2.0 - c * c)


# fine-grid trapezoid oracle values (h = 1e-3, L = 80), frozen before the
# build; they agree with momentum_closed_form to machine precision
MOMENTUM_ORACLE = {
    0.6: 0.7484598419647556,
    1.0: 0.2853981633974483,
    1.3: 0.042748953439680236,
    1.4: 0.001897054604163799,
}
