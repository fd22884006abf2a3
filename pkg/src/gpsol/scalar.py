"""Explicit scalar dark-soliton family and the speed <-> momentum dictionary.

For subsonic speed 0 <= c < sqrt(2) the dark soliton of the scalar problem is

    u_c(x) = sqrt((2-c^2)/2) * tanh(sqrt(2-c^2) x / 2) - i c/sqrt(2),

with modulus rho_c^2 = 1 - ((2-c^2)/2) sech^2(sqrt(2-c^2) x/2) and phase
gradient phi_c = c (1-rho_c^2) / (2 rho_c^2).  Its energy is
(2-c^2)^{3/2}/3; its momentum decreases from pi/2 (c -> 0) to 0 (c -> sqrt2)
and is computed by quadrature, which fixes the inverse map c(q) by bisection.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, SampledField
from .state import PairState, pin_boundary
from . import functionals

__all__ = ["ScalarSoliton", "build_scalar", "scalar_energy",
           "scalar_momentum_of_speed", "speed_of_momentum", "SOUND_SPEED"]

SOUND_SPEED = float(np.sqrt(2.0))


def _sech(y: np.ndarray) -> np.ndarray:
    # 2 e^{-|y|} / (1 + e^{-2|y|}): no overflow for large |y|
    e = np.exp(-np.abs(y))
    return 2.0 * e / (1.0 + e * e)


@dataclass(frozen=True, eq=False)
class ScalarSoliton:
    """Sampled dark-soliton profile at a given subsonic speed."""

    speed: float
    rho: SampledField
    phi: SampledField
    grid: Grid

    def state(self) -> PairState:
        """As a PairState with v = 0 and far-field data pinned at the ends."""
        rho = self.rho.values.copy()
        phi = self.phi.values.copy()
        v = np.zeros_like(rho)
        pin_boundary(rho, phi, v)
        return PairState.from_arrays(rho, phi, v, self.grid)


def _check_speed(c: float, allow_zero: bool) -> None:
    lo_ok = (c >= 0.0) if allow_zero else (c > 0.0)
    if not (lo_ok and c < SOUND_SPEED):
        lo = "[0" if allow_zero else "(0"
        raise ValueError(f"speed must lie in {lo}, sqrt(2)), got {c}")


def build_scalar(c: float, g: Grid) -> ScalarSoliton:
    """Sample the explicit soliton profile at speed c on a grid.

    rho^2 is evaluated as tanh^2 + (c^2/2) sech^2, which is exact at the dip
    (rho(0)^2 = c^2/2) and free of cancellation for small c.  At c = 0 the
    modulus is |tanh(x/sqrt2)| (the black soliton) and the phase gradient
    vanishes identically.
    """
    _check_speed(c, allow_zero=True)
    k = np.sqrt(2.0 - c * c) / 2.0
    th = np.tanh(k * g.x)
    se = _sech(k * g.x)
    rho2 = th * th + 0.5 * c * c * se * se
    rho = np.sqrt(rho2)
    if c == 0.0:
        phi = np.zeros_like(rho)
    else:
        phi = c * (1.0 - rho2) / (2.0 * rho2)
    return ScalarSoliton(c, SampledField(rho, g), SampledField(phi, g), g)


def scalar_energy(c: float) -> float:
    """Closed-form soliton energy (2-c^2)^{3/2}/3."""
    _check_speed(c, allow_zero=True)
    return float((2.0 - c * c) ** 1.5 / 3.0)


def scalar_momentum_of_speed(c: float, g: Grid) -> float:
    """Momentum of the sampled soliton at speed c (quadrature)."""
    _check_speed(c, allow_zero=False)
    return functionals.momentum(build_scalar(c, g).state())


def speed_of_momentum(q: float, g: Grid, tol: float = 1e-10) -> float:
    """Invert the speed -> momentum map by bisection to |dc| <= tol.

    The sampled momentum decreases from ~pi/2 near c = 0 to ~0 near the
    sound speed, so a sign change brackets the root.
    """
    if not (0.0 < q < np.pi / 2.0):
        raise ValueError(f"momentum target must lie in (0, pi/2), got {q}")
    lo, hi = 1e-12, SOUND_SPEED - 1e-12
    if scalar_momentum_of_speed(hi, g) >= q:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if scalar_momentum_of_speed(mid, g) > q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
