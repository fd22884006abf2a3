"""Uniform 1D grid, finite-difference derivatives and trapezoid quadrature.

Everything downstream (energies, momenta, solver updates) is built on the
three primitives defined here: `derivative`, `second_derivative` and
`integrate`.  All operators are second-order accurate; quadrature error on
smooth, exponentially localized profiles is dominated by domain truncation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = ["Grid", "SampledField", "derivative", "derivative_adjoint",
           "second_derivative", "integrate", "cumulative_integral"]


@dataclass(frozen=True)
class Grid:
    """Uniform mesh on [-L, L] with an odd number of nodes.

    Nodes are x_i = (i - (n-1)/2) * h with h = 2L/(n-1), so a node sits
    exactly at x = 0 and the mesh is symmetric about it (needed by the
    rearrangement placement rule).
    """

    half_width: float
    n_points: int

    def __post_init__(self):
        if not (self.half_width > 0.0 and np.isfinite(self.half_width)):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise ValueError(f"n_points must be odd and >= 3, got {self.n_points}")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    @property
    def center_index(self) -> int:
        return (self.n_points - 1) // 2

    @cached_property
    def x(self) -> np.ndarray:
        nodes = (np.arange(self.n_points) - self.center_index) * self.h
        nodes.setflags(write=False)
        return nodes

    @cached_property
    def quad_weights(self) -> np.ndarray:
        """Trapezoid weights: h at interior nodes, h/2 at the two ends."""
        w = np.full(self.n_points, self.h)
        w[0] *= 0.5
        w[-1] *= 0.5
        w.setflags(write=False)
        return w


@dataclass(frozen=True, eq=False)
class SampledField:
    """Real samples, one per grid node."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_points,):
            raise ValueError(
                f"field has {vals.shape} samples, grid has {self.grid.n_points} nodes")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite samples")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values: np.ndarray) -> "SampledField":
        return SampledField(values, self.grid)


def _derivative_values(v: np.ndarray, h: float) -> np.ndarray:
    """Central differences inside, second-order one-sided at the ends."""
    g = np.empty_like(v)
    g[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    g[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    g[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return g


def _second_derivative_values(v: np.ndarray, h: float) -> np.ndarray:
    """Compact 3-point second derivative; one-sided second-order at the ends."""
    s = np.empty_like(v)
    inv_h2 = 1.0 / (h * h)
    s[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) * inv_h2
    s[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * inv_h2
    s[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) * inv_h2
    return s


def _derivative_adjoint_values(g: np.ndarray, h: float, w: np.ndarray) -> np.ndarray:
    """W^{-1} D^T W g, the L2(W)-adjoint of the derivative operator.

    Applied to D(f) this is the exact discrete gradient of the quadratic
    form 0.5*integrate((Df)^2) with respect to f; at nodes away from the
    boundary it reduces to the wide-stencil -f''.
    """
    a = w * g
    out = np.zeros_like(g)
    inv_2h = 1.0 / (2.0 * h)
    # interior rows i: columns i-1 (coef -1) and i+1 (coef +1)
    out[2:] += a[1:-1] * inv_2h
    out[:-2] -= a[1:-1] * inv_2h
    # one-sided boundary rows
    out[0] += -3.0 * a[0] * inv_2h
    out[1] += 4.0 * a[0] * inv_2h
    out[2] += -1.0 * a[0] * inv_2h
    out[-1] += 3.0 * a[-1] * inv_2h
    out[-2] += -4.0 * a[-1] * inv_2h
    out[-3] += 1.0 * a[-1] * inv_2h
    return out / w


def _integrate_values(v: np.ndarray, h: float) -> float:
    return float(h * (v.sum() - 0.5 * (v[0] + v[-1])))


def derivative(f: SampledField) -> SampledField:
    """First derivative of a sampled field."""
    return f.with_values(_derivative_values(f.values, f.grid.h))


def derivative_adjoint(f: SampledField) -> SampledField:
    """L2(W)-adjoint of `derivative` applied to f."""
    return f.with_values(
        _derivative_adjoint_values(f.values, f.grid.h, f.grid.quad_weights))


def second_derivative(f: SampledField) -> SampledField:
    """Second derivative of a sampled field (compact stencil)."""
    return f.with_values(_second_derivative_values(f.values, f.grid.h))


def integrate(f: SampledField) -> float:
    """Trapezoid quadrature over [-L, L]."""
    return _integrate_values(f.values, f.grid.h)


def cumulative_integral(f: SampledField, anchor: float = 0.0) -> SampledField:
    """Running trapezoid integral F with F(-L) = anchor."""
    v = f.values
    h = f.grid.h
    out = np.empty_like(v)
    out[0] = anchor
    np.cumsum(0.5 * h * (v[1:] + v[:-1]), out=out[1:])
    out[1:] += anchor
    return f.with_values(out)
