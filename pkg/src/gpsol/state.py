"""Lifted representation of a candidate pair: modulus, phase gradient, bright field.

A `PairState` stores (rho, phi, v) on a common grid, where rho is the modulus
of the dark component, phi its phase derivative and v the real bright
component.  Admissible states satisfy 0 < rho < 2 everywhere and carry the
far-field data (rho, phi, v) = (1, 0, 0) pinned at the two boundary nodes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import Grid, SampledField, cumulative_integral

__all__ = ["PairState", "ConstraintTargets", "Violation", "validate",
           "reconstruct_phase", "NU_FLOOR"]

# Modulus floor used by the solver's clamp; keeps the lifting well defined
# through the iteration (the true uniform lower bound is not computable).
NU_FLOOR = 1e-6

_HALF_PI = float(np.pi / 2.0)


@dataclass(frozen=True, eq=False)
class PairState:
    """Discretized (rho, phi, v); immutable once constructed."""

    rho: SampledField
    phi: SampledField
    v: SampledField
    grid: Grid

    def __post_init__(self):
        for name in ("rho", "phi", "v"):
            field = getattr(self, name)
            if field.grid != self.grid:
                raise ValueError(f"{name} lives on a different grid")

    @classmethod
    def from_arrays(cls, rho, phi, v, grid: Grid) -> "PairState":
        return cls(SampledField(rho, grid), SampledField(phi, grid),
                   SampledField(v, grid), grid)

    def to_json(self) -> str:
        payload = {
            "L": self.grid.half_width,
            "n": self.grid.n_points,
            "rho": self.rho.values.tolist(),
            "phi": self.phi.values.tolist(),
            "v": self.v.values.tolist(),
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "PairState":
        payload = json.loads(text)
        grid = Grid(float(payload["L"]), int(payload["n"]))
        return cls.from_arrays(payload["rho"], payload["phi"], payload["v"], grid)


@dataclass(frozen=True)
class ConstraintTargets:
    """Momentum/mass targets and coupling constants."""

    q: float
    m: float
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0.0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if self.m < 0.0:
            raise ValueError(f"m must be nonnegative, got {self.m}")
        if not (0.0 < self.q < _HALF_PI):
            raise ValueError(f"q must lie in (0, pi/2), got {self.q}")


@dataclass(frozen=True)
class Violation:
    """One broken state invariant, with the node where it happened."""

    field: str
    node: int
    value: float
    constraint: str

    def __str__(self):
        return f"{self.field}[{self.node}] = {self.value!r} violates {self.constraint}"


def validate(s: PairState) -> list[Violation]:
    """Check all PairState invariants; empty list means admissible."""
    out: list[Violation] = []
    rho = s.rho.values
    last = s.grid.n_points - 1

    bad = np.nonzero(~((rho > 0.0) & (rho < 2.0)))[0]
    for i in bad:
        out.append(Violation("rho", int(i), float(rho[i]), "0 < rho < 2"))
    for i in (0, last):
        if rho[i] != 1.0:
            out.append(Violation("rho", i, float(rho[i]), "rho = 1 at boundary"))
        if s.phi.values[i] != 0.0:
            out.append(Violation("phi", i, float(s.phi.values[i]), "phi = 0 at boundary"))
        if s.v.values[i] != 0.0:
            out.append(Violation("v", i, float(s.v.values[i]), "v = 0 at boundary"))
    return out


def reconstruct_phase(s: PairState, anchor: float = 0.0) -> SampledField:
    """Phase theta as the running integral of phi with theta(-L) = anchor."""
    return cumulative_integral(s.phi, anchor)


def pin_boundary(rho: np.ndarray, phi: Optional[np.ndarray] = None,
                 v: Optional[np.ndarray] = None) -> None:
    """Impose the far-field data (1, 0, 0) at the two end nodes, in place."""
    rho[0] = rho[-1] = 1.0
    if phi is not None:
        phi[0] = phi[-1] = 0.0
    if v is not None:
        v[0] = v[-1] = 0.0
