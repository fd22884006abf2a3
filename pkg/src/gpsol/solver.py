"""Constrained minimizer over states with fixed momentum and mass.

The phase gradient is eliminated exactly each iteration: at fixed rho the
kinetic phase term is a quadratic with one linear constraint, minimized in
closed form by phi = mu * G(|1-rho|)/rho^2 with mu = 2q/I,
I = integral of G^2/rho^2, leaving the reduced objective

    E_red(rho, v) = E_pot(rho, v) + 2 q^2 / I(rho).

Descent runs in (rho, v) with an H1 (inverse-Helmholtz) preconditioner,
Barzilai-Borwein step proposals and Armijo backtracking; the mass constraint
is kept exact by rescaling v after every trial step, the momentum constraint
is exact by construction.  Periodic symmetrization sweeps are accepted only
when they do not increase the energy.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from . import functionals, rearrange, scalar, tws
from .functionals import g_weight
from .grid import (Grid, SampledField, _derivative_adjoint_values,
                   _derivative_values, _integrate_values)
from .state import NU_FLOOR, ConstraintTargets, PairState, pin_boundary

__all__ = ["MinimizeConfig", "SolveResult", "phase_optimum", "minimize",
           "extract_multipliers", "check_hypotheses", "PhaseEliminationError"]

_SQRT2 = float(np.sqrt(2.0))
_SQRT8_3 = float(np.sqrt(8.0) / 3.0)
_I_TINY = 1e-300


class PhaseEliminationError(ValueError):
    """A flat modulus profile cannot carry nonzero momentum."""


@dataclass(frozen=True)
class MinimizeConfig:
    targets: ConstraintTargets
    grid: Grid
    max_iters: int = 200_000
    grad_tol: float = 1e-8
    step_init: float = 0.5
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    symmetrize_every: int = 25
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.grad_tol > 0.0):
            raise ValueError("grad_tol must be positive")
        if not (0.0 < self.backtrack_factor < 1.0):
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if not (0.0 < self.armijo_c < 1.0):
            raise ValueError("armijo_c must lie in (0, 1)")
        if self.symmetrize_every < 0:
            raise ValueError("symmetrize_every must be >= 0")


@dataclass(frozen=True)
class SolveResult:
    state: PairState
    multiplier_c: float
    multiplier_lambda: float
    multiplier_c_crosscheck: float
    energy: float
    grad_norm: float
    iterations: int
    converged: bool
    h1_holds: bool
    h2_holds: bool
    bounds_ok: bool
    first_integral_residual: float
    ode_residual: float
    trace: np.ndarray  # rows (iter, E, grad_norm, p_residual, mass_residual)
    message: str = ""

    def summary(self) -> dict:
        return {
            "energy": self.energy,
            "multiplier_c": self.multiplier_c,
            "multiplier_lambda": self.multiplier_lambda,
            "multiplier_c_crosscheck": self.multiplier_c_crosscheck,
            "grad_norm": self.grad_norm,
            "iterations": self.iterations,
            "converged": self.converged,
            "h1_holds": self.h1_holds,
            "h2_holds": self.h2_holds,
            "bounds_ok": self.bounds_ok,
            "first_integral_residual": self.first_integral_residual,
            "ode_residual": self.ode_residual,
            "p_residual": float(self.trace[-1, 3]) if len(self.trace) else float("nan"),
            "mass_residual": float(self.trace[-1, 4]) if len(self.trace) else float("nan"),
        }


def _phi_values(rho: np.ndarray, q: float, h: float):
    """Optimal phase gradient at fixed rho: (phi, kinetic, I, mu)."""
    g = g_weight(np.abs(1.0 - rho))
    g_over_rho2 = g / (rho * rho)
    I = _integrate_values(g * g_over_rho2, h)
    if q == 0.0:
        return np.zeros_like(rho), 0.0, I, 0.0
    if I <= _I_TINY:
        raise PhaseEliminationError(
            f"flat modulus cannot carry momentum q = {q} (I = {I!r})")
    mu = 2.0 * q / I
    return mu * g_over_rho2, 2.0 * q * q / I, I, mu


def phase_optimum(rho: SampledField, q: float) -> tuple[SampledField, float]:
    """Momentum-exact phase gradient of minimal kinetic energy at fixed rho."""
    phi, kinetic, _, _ = _phi_values(rho.values, q, rho.grid.h)
    return rho.with_values(phi), kinetic


def check_hypotheses(E_min_est: float, t: ConstraintTargets) -> tuple[bool, bool]:
    """Evaluate the two alternative smallness conditions at an energy estimate."""
    h1 = (t.alpha ** 2 < t.beta) and (
        E_min_est < (1.0 - t.alpha ** 2 / t.beta) * _SQRT8_3)
    h2 = E_min_est + 0.5 * t.alpha * t.m < _SQRT8_3
    return h1, h2


def _multiplier_c_values(s: PairState, t: ConstraintTargets) -> float:
    """Speed multiplier from pairing dE/drho with the dip direction (1-rho^2)/rho."""
    p = functionals.momentum(s)
    if p == 0.0:
        raise ValueError("momentum pairing denominator vanishes (p = 0)")
    g_rho, _, _ = functionals.energy_gradient(s, t)
    rho = s.rho.values
    w_dir = (1.0 - rho * rho) / rho
    pairing = _integrate_values(g_rho.values * w_dir, s.grid.h)
    return pairing / (-2.0 * p)


def extract_multipliers(s: PairState,
                        t: ConstraintTargets) -> tuple[float, float, float]:
    """(c, lambda, c_crosscheck) at a near-critical state.

    c pairs the energy gradient with the direction generated by the dip;
    lambda comes from testing the bright equation against v itself,
    lambda = (|v'|^2 + beta |v|_4^4 + alpha * int rho^2 v^2) / m; the
    crosscheck recovers c from the momentum identity q = (c/4) int (1-rho^2)^2/rho^2.
    """
    h = s.grid.h
    rho, v = s.rho.values, s.v.values
    m_val = functionals.mass(s)
    if m_val <= 1e-14:
        raise ValueError(f"mass too small to extract lambda ({m_val!r})")
    c = _multiplier_c_values(s, t)
    dv = _derivative_values(v, h)
    lam = (_integrate_values(dv * dv, h)
           + t.beta * _integrate_values(v ** 4, h)
           + t.alpha * _integrate_values(rho * rho * v * v, h)) / m_val
    q = functionals.momentum(s)
    one_m_rho2 = 1.0 - rho * rho
    c_cross = 4.0 * q / _integrate_values(one_m_rho2 * one_m_rho2 / (rho * rho), h)
    return c, lam, c_cross


def _c_crosscheck_values(s: PairState) -> float:
    rho = s.rho.values
    q = functionals.momentum(s)
    one_m_rho2 = 1.0 - rho * rho
    return 4.0 * q / _integrate_values(one_m_rho2 * one_m_rho2 / (rho * rho),
                                       s.grid.h)


class _Reduced:
    """Reduced objective, exact discrete gradients, and retraction helpers."""

    def __init__(self, cfg: MinimizeConfig):
        self.t = cfg.targets
        self.grid = cfg.grid
        self.h = cfg.grid.h
        self.w = cfg.grid.quad_weights
        self.scalar_mode = cfg.targets.m == 0.0
        # inverse-Helmholtz preconditioner (I - d_xx) on interior nodes
        n_int = cfg.grid.n_points - 2
        inv_h2 = 1.0 / (self.h * self.h)
        ab = np.zeros((2, n_int))
        ab[0, 1:] = -inv_h2
        ab[1, :] = 1.0 + 2.0 * inv_h2
        self._chol = cholesky_banded(ab)

    def precondition(self, g: np.ndarray) -> np.ndarray:
        d = np.zeros_like(g)
        d[1:-1] = cho_solve_banded((self._chol, False), g[1:-1])
        return d

    def energy(self, rho: np.ndarray, v: np.ndarray) -> float:
        t, h = self.t, self.h
        drho = _derivative_values(rho, h)
        one_m_rho2 = 1.0 - rho * rho
        dens = 0.5 * drho * drho + 0.25 * one_m_rho2 * one_m_rho2
        if not self.scalar_mode:
            dv = _derivative_values(v, h)
            dens = dens + (0.5 * dv * dv + 0.25 * t.beta * v ** 4
                           - 0.5 * t.alpha * one_m_rho2 * v * v)
        try:
            _, kinetic, _, _ = _phi_values(rho, t.q, h)
        except PhaseEliminationError:
            return float("inf")
        return _integrate_values(dens, h) + kinetic

    def gradients(self, rho: np.ndarray, v: np.ndarray):
        """(g_rho, g_v_tangent, phi): exact W-gradients of the reduced energy."""
        t, h, w = self.t, self.h, self.w
        phi, _, I, mu = _phi_values(rho, t.q, h)
        s_abs = np.abs(1.0 - rho)
        g = g_weight(s_abs)
        # d/drho of G(|1-rho|)^2 / rho^2, pointwise
        g_prime = (2.0 - 2.0 * s_abs) * np.sign(rho - 1.0)
        dI = 2.0 * g * g_prime / (rho * rho) - 2.0 * g * g / rho ** 3
        kin_grad = (-0.5 * mu * mu) * dI  # -(2 q^2 / I^2) dI

        g_rho = (_derivative_adjoint_values(_derivative_values(rho, h), h, w)
                 + rho * (rho * rho - 1.0) + kin_grad)
        if not self.scalar_mode:
            g_rho = g_rho + t.alpha * rho * v * v
        g_rho[0] = g_rho[-1] = 0.0

        if self.scalar_mode:
            return g_rho, np.zeros_like(rho), phi

        g_v = (_derivative_adjoint_values(_derivative_values(v, h), h, w)
               + t.beta * v ** 3 - t.alpha * (1.0 - rho * rho) * v)
        g_v[0] = g_v[-1] = 0.0
        g_v = self.project_tangent(g_v, v)
        return g_rho, g_v, phi

    def project_tangent(self, g: np.ndarray, v: np.ndarray) -> np.ndarray:
        vv = _integrate_values(v * v, self.h)
        gv = _integrate_values(g * v, self.h)
        return g - (gv / vv) * v

    def hessian_operator(self, rho: np.ndarray, v: np.ndarray):
        """Exact W-Hessian of the reduced energy as an operator on (u_rho, u_v).

        The v-block is the Riemannian Hessian on the mass sphere:
        P (H - sigma I) P with sigma = <grad_v, v>_W / m.  Needed by the
        Newton polish, where finite-difference products are too noisy to
        resolve the near-null grid-scale modes of the central-difference
        stiffness operator.
        """
        t, h, w = self.t, self.h, self.w
        s_abs = np.abs(1.0 - rho)
        g = g_weight(s_abs)
        sigma_s = np.sign(rho - 1.0)
        g_prime = (2.0 - 2.0 * s_abs) * sigma_s
        rho2 = rho * rho
        _, _, I, mu = _phi_values(rho, t.q, h)
        dI = 2.0 * g * g_prime / rho2 - 2.0 * g * g / rho ** 3
        # pointwise second derivative of G(|1-rho|)^2 / rho^2 (C^2 across rho=1)
        gp2 = (2.0 - 2.0 * s_abs) ** 2
        d2I = (2.0 * (gp2 - 2.0 * g) / rho2
               - 8.0 * g * g_prime / rho ** 3
               + 6.0 * g * g / rho ** 4)
        q2 = t.q * t.q
        kin1 = 0.0 if I == 0.0 else 4.0 * q2 / I ** 3
        kin0 = 0.0 if I == 0.0 else -2.0 * q2 / (I * I)

        diag_rho = 3.0 * rho2 - 1.0 + kin0 * d2I
        if not self.scalar_mode:
            diag_rho = diag_rho + t.alpha * v * v
            diag_v = 3.0 * t.beta * v * v - t.alpha * (1.0 - rho2)
            cross = 2.0 * t.alpha * rho * v
            g_v_raw = (_derivative_adjoint_values(_derivative_values(v, h), h, w)
                       + t.beta * v ** 3 - t.alpha * (1.0 - rho2) * v)
            g_v_raw[0] = g_v_raw[-1] = 0.0
            sigma_c = _integrate_values(g_v_raw * v, h) / self.t.m

        def apply(u_rho: np.ndarray, u_v: np.ndarray):
            h_rho = (_derivative_adjoint_values(_derivative_values(u_rho, h), h, w)
                     + diag_rho * u_rho
                     + kin1 * _integrate_values(dI * u_rho, h) * dI)
            if self.scalar_mode:
                h_rho[0] = h_rho[-1] = 0.0
                return h_rho, np.zeros_like(u_v)
            h_rho = h_rho + cross * u_v
            h_v = (_derivative_adjoint_values(_derivative_values(u_v, h), h, w)
                   + diag_v * u_v + cross * u_rho - sigma_c * u_v)
            h_rho[0] = h_rho[-1] = 0.0
            h_v[0] = h_v[-1] = 0.0
            h_v = self.project_tangent(h_v, v)
            return h_rho, h_v

        return apply

    def rescale_mass(self, v: np.ndarray) -> np.ndarray:
        if self.scalar_mode:
            return v
        mv = _integrate_values(v * v, self.h)
        if mv <= 0.0:
            raise FloatingPointError("bright component collapsed to zero mass")
        return v * np.sqrt(self.t.m / mv)

    def retract(self, rho: np.ndarray, v: np.ndarray, tau: float,
                d_rho: np.ndarray, d_v: np.ndarray):
        rho_new = np.clip(rho - tau * d_rho, NU_FLOOR, 2.0 - NU_FLOOR)
        pin_boundary(rho_new)
        v_new = self.rescale_mass(v - tau * d_v) if not self.scalar_mode else v
        return rho_new, v_new

    def norm(self, g_rho: np.ndarray, g_v: np.ndarray) -> float:
        return float(np.sqrt(_integrate_values(g_rho * g_rho, self.h)
                             + _integrate_values(g_v * g_v, self.h)))


def _default_init(cfg: MinimizeConfig):
    t, g = cfg.targets, cfg.grid
    c0 = scalar.speed_of_momentum(t.q, g)
    rho = scalar.build_scalar(c0, g).rho.values.copy()
    if t.m > 0.0:
        v = np.sqrt(t.m / 2.0) * (1.0 / np.cosh(g.x))
    else:
        v = np.zeros(g.n_points)
    pin_boundary(rho, v=v)
    return rho, v


def _prepare_init(cfg: MinimizeConfig, init: Optional[PairState]):
    red = _Reduced(cfg)
    if init is None:
        rho, v = _default_init(cfg)
    else:
        rho = np.clip(init.rho.values, NU_FLOOR, 2.0 - NU_FLOOR)
        v = init.v.values.copy()
        pin_boundary(rho, v=v)
        if not red.scalar_mode and _integrate_values(v * v, cfg.grid.h) <= 0.0:
            v = np.sqrt(cfg.targets.m / 2.0) * (1.0 / np.cosh(cfg.grid.x))
            pin_boundary(rho, v=v)
    v = red.rescale_mass(v)
    return red, rho, v


def minimize(cfg: MinimizeConfig, init: Optional[PairState] = None) -> SolveResult:
    """Run the projected descent to a critical point of the reduced energy.

    Both constraints hold at every iterate (momentum by construction, mass by
    rescaling); the energy trace is nonincreasing across accepted steps.
    Returns a full SolveResult whether or not the gradient tolerance was
    reached; `converged` and `message` say which.
    """
    red, rho, v = _prepare_init(cfg, init)
    t, h = cfg.targets, cfg.grid.h

    energy_val = red.energy(rho, v)
    trace: list[tuple] = []
    tau = cfg.step_init
    prev_x = prev_d = None
    grad_norm = float("inf")
    message = "max_iters reached"
    converged = False
    iteration = 0
    polish_at = max(1e-5, 1e2 * cfg.grad_tol)

    for iteration in range(1, cfg.max_iters + 1):
        g_rho, g_v, phi = red.gradients(rho, v)
        grad_norm = red.norm(g_rho, g_v)
        p_now = 0.5 * _integrate_values(g_weight(np.abs(1.0 - rho)) * phi, h)
        m_now = _integrate_values(v * v, h)
        trace.append((iteration - 1, energy_val, grad_norm,
                      abs(p_now - t.q), abs(m_now - t.m)))

        if grad_norm <= cfg.grad_tol:
            converged = True
            message = "gradient tolerance reached"
            break
        if grad_norm <= polish_at and iteration > 1:
            message = "descent phase done"
            break

        d_rho = red.precondition(g_rho)
        d_v = red.precondition(g_v)
        if not red.scalar_mode:
            d_v = red.project_tangent(d_v, v)
        slope = (_integrate_values(g_rho * d_rho, h)
                 + _integrate_values(g_v * d_v, h))
        if not np.isfinite(slope) or slope <= 0.0:
            d_rho, d_v = g_rho, g_v  # preconditioner fallback
            slope = grad_norm * grad_norm

        # Barzilai-Borwein proposal in the preconditioned geometry
        x_vec = np.concatenate([rho, v])
        d_vec = np.concatenate([d_rho, d_v])
        if prev_x is not None:
            s_vec = x_vec - prev_x
            y_vec = d_vec - prev_d
            sy = float(s_vec @ y_vec)
            if sy > 0.0:
                tau = min(max(float(s_vec @ s_vec) / sy, 1e-10), 1e6)
        prev_x, prev_d = x_vec, d_vec

        accepted = False
        for _ in range(60):
            try:
                rho_t, v_t = red.retract(rho, v, tau, d_rho, d_v)
            except FloatingPointError:
                tau *= cfg.backtrack_factor
                continue
            e_t = red.energy(rho_t, v_t)
            if e_t <= energy_val - cfg.armijo_c * tau * slope:
                rho, v, energy_val = rho_t, v_t, e_t
                accepted = True
                break
            tau *= cfg.backtrack_factor
        if not accepted:
            # energy differences are below summation roundoff; hand over to
            # the gradient-driven Newton polish
            message = "line search reached the energy roundoff floor"
            break

        if cfg.symmetrize_every and iteration % cfg.symmetrize_every == 0:
            rho, v, energy_val = _try_symmetrize(red, cfg, rho, v, energy_val)

    if not converged:
        # Newton-CG polish: descent has brought the state near the critical
        # point, where energy comparisons drown in roundoff but the analytic
        # gradient is still clean; drive the gradient norm down directly.
        rho, v, energy_val, grad_norm, extra, converged = _polish(
            red, cfg, rho, v, energy_val, grad_norm, trace, iteration)
        iteration += extra
        if converged:
            message = "gradient tolerance reached (newton polish)"
        else:
            message += f"; polish stalled at gradient norm {grad_norm:.3e}"

    # final symmetrization pass (energy-guarded, keeps the profiles arranged)
    if converged:
        rho_s, v_s, e_s = _try_symmetrize(red, cfg, rho, v, energy_val)
        g_rho_s, g_v_s, _ = red.gradients(rho_s, v_s)
        if red.norm(g_rho_s, g_v_s) <= cfg.grad_tol:
            rho, v, energy_val = rho_s, v_s, e_s

    return _finalize(red, cfg, rho, v, iteration, grad_norm, converged,
                     message, np.array(trace))


def _polish(red: _Reduced, cfg: MinimizeConfig, rho: np.ndarray, v: np.ndarray,
            energy_val: float, grad_norm: float, trace: list, iter0: int,
            max_newton: int = 60):
    """Damped Newton-CG on the projected gradient (matrix-free)."""
    t, h = cfg.targets, red.h
    x = np.concatenate([rho, v])
    n = rho.size

    def split(vec):
        return vec[:n], vec[n:]

    def grad_vec(vec):
        r, w_ = split(vec)
        g_r, g_w, _ = red.gradients(r, w_)
        return np.concatenate([g_r, g_w])

    def dot(a, b):
        ar, av = split(a)
        br, bv = split(b)
        return _integrate_values(ar * br, h) + _integrate_values(av * bv, h)

    def precondition(vec):
        pr, pv = split(vec)
        pr = red.precondition(pr)
        pv = red.precondition(pv)
        if not red.scalar_mode:
            pv = red.project_tangent(pv, split(x)[1])
        return np.concatenate([pr, pv])

    def snap_even(vec):
        # remove roundoff-sized odd components (soft translation direction)
        r, w_ = split(vec)
        scale = 1.0 + float(np.max(np.abs(vec)))
        if (np.max(np.abs(r - r[::-1])) <= 1e-7 * scale
                and np.max(np.abs(w_ - w_[::-1])) <= 1e-7 * scale):
            r, w_ = _evenize(r), _evenize(w_)
            pin_boundary(r, v=w_)
            w_ = red.rescale_mass(w_) if not red.scalar_mode else w_
            return np.concatenate([r, w_])
        return vec

    x = snap_even(x)
    g = grad_vec(x)
    gn = np.sqrt(dot(g, g))
    noise_guard = 1e-12 * (1.0 + abs(energy_val))

    for newton_it in range(1, max_newton + 1):
        if gn <= cfg.grad_tol:
            rho, v = split(x)
            return rho, v, red.energy(rho, v), gn, newton_it, True

        apply_h = red.hessian_operator(*split(x))

        def hess_vec(u):
            hr, hv = apply_h(*split(u))
            return np.concatenate([hr, hv])

        # preconditioned CG for H delta = g, with negative-curvature exit
        delta = np.zeros_like(x)
        r = g.copy()
        z = precondition(r)
        p = z.copy()
        rz = dot(r, z)
        target = max(0.1 * gn, 1e-2 * cfg.grad_tol)
        for _ in range(400):
            hp = hess_vec(p)
            php = dot(p, hp)
            if php <= 1e-14 * dot(p, p):
                if not np.any(delta):
                    delta = z
                break
            a = rz / php
            delta = delta + a * p
            r = r - a * hp
            if np.sqrt(dot(r, r)) <= target:
                break
            z = precondition(r)
            rz_new = dot(r, z)
            p = z + (rz_new / rz) * p
            rz = rz_new

        d_rho, d_v = split(delta)
        improved = False
        tau = 1.0
        for _ in range(25):
            rho_t, v_t = red.retract(*split(x), tau, d_rho, d_v)
            x_t = snap_even(np.concatenate([rho_t, v_t]))
            g_t = grad_vec(x_t)
            gn_t = np.sqrt(dot(g_t, g_t))
            e_t = red.energy(*split(x_t))
            if gn_t <= (1.0 - 1e-4 * tau) * gn and e_t <= energy_val + noise_guard:
                x, g, gn, energy_val = x_t, g_t, gn_t, e_t
                improved = True
                break
            tau *= 0.5
        rho_now, v_now = split(x)
        phi_now, _, _, _ = _phi_values(rho_now, t.q, h)
        p_res = abs(0.5 * _integrate_values(
            g_weight(np.abs(1.0 - rho_now)) * phi_now, h) - t.q)
        m_res = abs(_integrate_values(v_now * v_now, h) - t.m)
        trace.append((iter0 + newton_it - 1, energy_val, gn, p_res, m_res))
        if not improved:
            break

    rho, v = split(x)
    return rho, v, energy_val, gn, newton_it, bool(gn <= cfg.grad_tol)


def _evenize(a: np.ndarray) -> np.ndarray:
    """Project onto even-parity fields (the minimizer's symmetry class)."""
    return 0.5 * (a + a[::-1])


def _try_symmetrize(red: _Reduced, cfg: MinimizeConfig, rho: np.ndarray,
                    v: np.ndarray, energy_val: float):
    t = cfg.targets
    phi, _, _, _ = _phi_values(rho, t.q, red.h)
    state = PairState.from_arrays(rho, phi, v, cfg.grid)
    try:
        sym, _ = rearrange.symmetrize(state, t)
    except rearrange.SymmetrizationError:
        return rho, v, energy_val
    # rearrangement leaves adjacent-rank gaps between mirrored nodes; project
    # onto exactly even fields so roundoff cannot excite the translation mode
    rho_s = np.clip(_evenize(sym.rho.values), NU_FLOOR, 2.0 - NU_FLOOR)
    pin_boundary(rho_s)
    v_s = _evenize(sym.v.values)
    v_s[0] = v_s[-1] = 0.0
    try:
        v_s = red.rescale_mass(v_s)
    except FloatingPointError:
        return rho, v, energy_val
    e_s = red.energy(rho_s, v_s)
    if e_s <= energy_val + 1e-12:
        return rho_s, v_s, e_s
    return rho, v, energy_val


def _finalize(red: _Reduced, cfg: MinimizeConfig, rho: np.ndarray,
              v: np.ndarray, iterations: int, grad_norm: float,
              converged: bool, message: str, trace: np.ndarray) -> SolveResult:
    t = cfg.targets
    phi, _, _, _ = _phi_values(rho, t.q, red.h)
    state = PairState.from_arrays(rho, phi, v, cfg.grid)
    final_energy = functionals.energy(state, t)

    if red.scalar_mode:
        mult_c = _multiplier_c_values(state, t)
        mult_lambda = float("nan")
        c_cross = _c_crosscheck_values(state)
        lam_for_residual = 0.0
        bounds_ok = 0.0 < mult_c < _SQRT2
    else:
        mult_c, mult_lambda, c_cross = extract_multipliers(state, t)
        lam_for_residual = mult_lambda
        lam_hi = 2.0 * t.alpha + np.sqrt(32.0) * t.q / t.m
        bounds_ok = (0.0 < mult_c < _SQRT2
                     and 0.5 * mult_c ** 2 * t.alpha < mult_lambda < lam_hi)

    h1, h2 = check_hypotheses(final_energy, t)
    _, _, ode_norm = tws.ode_residual(state, mult_c, lam_for_residual, t)
    fi_max = tws.interior_max(
        tws.first_integral_residual(state, mult_c, lam_for_residual, t))

    return SolveResult(
        state=state,
        multiplier_c=mult_c,
        multiplier_lambda=mult_lambda,
        multiplier_c_crosscheck=c_cross,
        energy=final_energy,
        grad_norm=grad_norm,
        iterations=iterations,
        converged=converged,
        h1_holds=h1,
        h2_holds=h2,
        bounds_ok=bool(bounds_ok),
        first_integral_residual=fi_max,
        ode_residual=ode_norm,
        trace=trace,
        message=message,
    )
