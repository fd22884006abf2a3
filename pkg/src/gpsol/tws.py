"""Independent checks that a profile solves the traveling-wave system.

A pair (rho, v) at speed c and chemical potential lam must satisfy

    -rho'' + c^2 (1 - rho^4) / (4 rho^3) = (1 - rho^2 - alpha v^2) rho,
    -v'' = (lam - alpha rho^2 - beta v^2) v,

together with the pointwise first integral

    (rho')^2 + (v')^2 = (1 - c^2/(2 rho^2)) (1-rho^2)^2 / 2
                        + (beta v^2 / 2 + alpha rho^2 - lam) v^2.

These checks are discretized with compact stencils, independent of the
solver's adjoint-based gradients, so agreement is a genuine cross-check.
`shoot` reconstructs even profiles a third way, by integrating the ODEs
outward from x = 0.
"""
from __future__ import annotations

import numpy as np

from .grid import (Grid, SampledField, _derivative_values,
                   _second_derivative_values)
from .state import ConstraintTargets, PairState

__all__ = ["ode_residual", "first_integral_residual", "shoot",
           "ShootBlowUpError"]


class ShootBlowUpError(RuntimeError):
    """Outward integration left the trust region; carries the exit coordinate."""

    def __init__(self, x_exit: float):
        super().__init__(f"shooting integration blew up at x = {x_exit:.6g}")
        self.x_exit = x_exit


def _residual_values(s: PairState, c: float, lam: float, t: ConstraintTargets):
    h = s.grid.h
    rho, v = s.rho.values, s.v.values
    rho_xx = _second_derivative_values(rho, h)
    v_xx = _second_derivative_values(v, h)
    r_rho = (-rho_xx + c * c * (1.0 - rho ** 4) / (4.0 * rho ** 3)
             - (1.0 - rho * rho - t.alpha * v * v) * rho)
    r_v = -v_xx - (lam - t.alpha * rho * rho - t.beta * v * v) * v
    r_rho[0] = r_rho[-1] = 0.0
    r_v[0] = r_v[-1] = 0.0
    return r_rho, r_v


def ode_residual(s: PairState, c: float, lam: float,
                 t: ConstraintTargets) -> tuple[SampledField, SampledField, float]:
    """Pointwise residuals of both traveling-wave equations and their joint L2 norm."""
    r_rho, r_v = _residual_values(s, c, lam, t)
    h = s.grid.h
    norm = float(np.sqrt(h * ((r_rho * r_rho).sum() + (r_v * r_v).sum())))
    return s.rho.with_values(r_rho), s.v.with_values(r_v), norm


def first_integral_residual(s: PairState, c: float, lam: float,
                            t: ConstraintTargets) -> SampledField:
    """Pointwise defect of the first-integral identity (zero on true solutions)."""
    h = s.grid.h
    rho, v = s.rho.values, s.v.values
    drho = _derivative_values(rho, h)
    dv = _derivative_values(v, h)
    one_m_rho2 = 1.0 - rho * rho
    rhs = ((1.0 - c * c / (2.0 * rho * rho)) * one_m_rho2 * one_m_rho2 / 2.0
           + (0.5 * t.beta * v * v + t.alpha * rho * rho - lam) * v * v)
    res = drho * drho + dv * dv - rhs
    res[0] = res[-1] = 0.0
    return s.rho.with_values(res)


def interior_max(f: SampledField) -> float:
    """Max-norm over interior nodes."""
    return float(np.max(np.abs(f.values[1:-1])))


def _rhs(y: np.ndarray, c: float, lam: float, alpha: float, beta: float) -> np.ndarray:
    rho, drho, v, dv = y
    rho_xx = (c * c * (1.0 - rho ** 4) / (4.0 * rho ** 3)
              + (rho * rho + alpha * v * v - 1.0) * rho)
    v_xx = (alpha * rho * rho + beta * v * v - lam) * v
    return np.array([drho, rho_xx, dv, v_xx])


def shoot(c: float, lam: float, t: ConstraintTargets, dip: float, amp: float,
          g: Grid) -> PairState:
    """Integrate the traveling-wave ODEs outward from an even center condition.

    Starts at x = 0 with rho(0) = dip, v(0) = amp and zero slopes, advances
    with classical fixed-step RK4 on the grid spacing, and reflects evenly
    onto [-L, 0].  The profile is returned whatever its tail does; only loss
    of finiteness (or the modulus leaving (0, 10)) aborts the integration.
    """
    if not (0.0 < dip < 1.0):
        raise ValueError(f"dip must lie in (0, 1), got {dip}")
    if amp < 0.0:
        raise ValueError(f"amp must be nonnegative, got {amp}")
    if not (0.0 < c < np.sqrt(2.0)):
        raise ValueError(f"speed must lie in (0, sqrt(2)), got {c}")

    h = g.h
    half = g.center_index
    rho_half = np.empty(half + 1)
    v_half = np.empty(half + 1)
    y = np.array([dip, 0.0, amp, 0.0])
    rho_half[0], v_half[0] = dip, amp
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i in range(half):
            k1 = _rhs(y, c, lam, t.alpha, t.beta)
            k2 = _rhs(y + 0.5 * h * k1, c, lam, t.alpha, t.beta)
            k3 = _rhs(y + 0.5 * h * k2, c, lam, t.alpha, t.beta)
            k4 = _rhs(y + h * k3, c, lam, t.alpha, t.beta)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(y)) or not (0.0 < y[0] < 10.0) or abs(y[2]) > 1e6:
                raise ShootBlowUpError((i + 1) * h)
            rho_half[i + 1], v_half[i + 1] = y[0], y[2]

    rho = np.concatenate([rho_half[:0:-1], rho_half])
    v = np.concatenate([v_half[:0:-1], v_half])
    phi = c * (1.0 - rho * rho) / (2.0 * rho * rho)
    return PairState.from_arrays(rho, phi, v, g)
