"""Command-line front end: solve, sweep, and verification suites.

Exit codes: 0 success, 1 usage/input error, 2 numerical non-convergence.
All floating-point values in machine-readable outputs carry 17 significant
digits; figures are rendered next to the delimited outputs unless disabled.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import functionals, rearrange, scalar, tws
from .grid import Grid, SampledField
from .solver import MinimizeConfig, minimize
from .state import ConstraintTargets, PairState
from .surface import check_properties, sweep, table_to_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2

_F = ".17g"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are exit code 1
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _InputError(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), _F)


def _add_numeric_flags(p: argparse.ArgumentParser, with_targets: bool = True):
    if with_targets:
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--L", type=float, default=40.0, help="half-width of the box")
    p.add_argument("--n", type=int, default=8001, help="number of grid nodes (odd)")
    p.add_argument("--tol", type=float, default=1e-8, help="gradient tolerance")
    p.add_argument("--max-iters", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--symmetrize-every", type=int, default=25)


def _check_common(args) -> None:
    if getattr(args, "alpha", 1.0) <= 0:
        raise _InputError("--alpha must be positive")
    if getattr(args, "beta", 0.0) < 0:
        raise _InputError("--beta must be nonnegative")
    if args.L <= 0:
        raise _InputError("--L must be positive")
    if args.n < 3 or args.n % 2 == 0:
        raise _InputError("--n must be odd and >= 3")
    if args.tol <= 0:
        raise _InputError("--tol must be positive")


def _targets(args, q: float, m: float) -> ConstraintTargets:
    if not (0.0 < q < np.pi / 2):
        raise _InputError(f"--q must lie in (0, pi/2), got {q}")
    if m < 0:
        raise _InputError(f"--m must be nonnegative, got {m}")
    return ConstraintTargets(q=q, m=m, alpha=args.alpha, beta=args.beta)


def _config(args) -> MinimizeConfig:
    return MinimizeConfig(
        targets=_targets(args, args.q, args.m),
        grid=Grid(args.L, args.n),
        max_iters=args.max_iters,
        grad_tol=args.tol,
        symmetrize_every=args.symmetrize_every,
        seed=args.seed,
    )


def _result_payload(res, with_profiles: bool) -> dict:
    payload = res.summary()
    payload["L"] = res.state.grid.half_width
    payload["n"] = res.state.grid.n_points
    if with_profiles:
        payload["profiles"] = {
            "rho": res.state.rho.values.tolist(),
            "phi": res.state.phi.values.tolist(),
            "v": res.state.v.values.tolist(),
        }
    return payload


def _write_solve_outputs(res, args) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        (out / "result.json").write_text(
            json.dumps(_result_payload(res, args.profiles), indent=2) + "\n")
    else:
        rows = ["key,value"]
        for key, value in _result_payload(res, False).items():
            rows.append(f"{key},{value if isinstance(value, (bool, int)) else _fmt(value)}")
        (out / "result.csv").write_text("\n".join(rows) + "\n")
    if args.profiles:
        x = res.state.grid.x
        lines = ["x,rho,phi,v"]
        for i in range(res.state.grid.n_points):
            lines.append(",".join(_fmt(a) for a in (
                x[i], res.state.rho.values[i], res.state.phi.values[i],
                res.state.v.values[i])))
        (out / "profiles.csv").write_text("\n".join(lines) + "\n")
    if args.trace:
        lines = ["iter,energy,grad_norm,p_residual,mass_residual"]
        for row in res.trace:
            lines.append(f"{int(row[0])}," + ",".join(_fmt(a) for a in row[1:]))
        (out / "trace.csv").write_text("\n".join(lines) + "\n")
    if not args.no_figures:
        from . import plots
        plots.profile_figure(
            res.state, str(out / "profiles.png"),
            title=f"q={args.q}, m={args.m}, alpha={args.alpha}, beta={args.beta}")
        plots.trace_figure(res.trace, str(out / "trace.png"))


def cmd_solve(args) -> int:
    _check_common(args)
    cfg = _config(args)
    res = minimize(cfg)
    s = res.summary()
    print(f"E={s['energy']:.10g} c={s['multiplier_c']:.10g} "
          f"lambda={s['multiplier_lambda']:.10g} "
          f"c_crosscheck={s['multiplier_c_crosscheck']:.10g} "
          f"grad_norm={s['grad_norm']:.3g} iters={s['iterations']} "
          f"p_res={s['p_residual']:.3g} mass_res={s['mass_residual']:.3g} "
          f"H1={s['h1_holds']} H2={s['h2_holds']} bounds_ok={s['bounds_ok']} "
          f"ode_residual={s['ode_residual']:.3g} "
          f"first_integral={s['first_integral_residual']:.3g} "
          f"converged={s['converged']}")
    if args.out:
        _write_solve_outputs(res, args)
    return EXIT_OK if res.converged else EXIT_NUMERIC


def cmd_sweep(args) -> int:
    _check_common(args)
    try:
        q_list = [float(tok) for tok in args.q_list.split(",") if tok]
        m_list = [float(tok) for tok in args.m_list.split(",") if tok]
    except ValueError as exc:
        raise _InputError(f"--q-list/--m-list must be comma-separated reals: {exc}")
    if not q_list or not m_list:
        raise _InputError("--q-list and --m-list must be nonempty")
    for q in q_list:
        if not (0.0 < q < np.pi / 2):
            raise _InputError(f"--q-list entries must lie in (0, pi/2), got {q}")
    if any(m < 0 for m in m_list):
        raise _InputError("--m-list entries must be nonnegative")

    t = ConstraintTargets(q=q_list[0], m=0.0, alpha=args.alpha, beta=args.beta)
    cfg = MinimizeConfig(targets=t, grid=Grid(args.L, args.n),
                         max_iters=args.max_iters, grad_tol=args.tol,
                         symmetrize_every=args.symmetrize_every, seed=args.seed)
    table = sweep(q_list, m_list, t, cfg, restarts=args.restarts, jobs=args.jobs)
    report = check_properties(table, t, tol=args.ptol, cfg=cfg)

    out = Path(args.out) if args.out else None
    csv_text = table_to_csv(table)
    if out:
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.csv").write_text(csv_text)
        (out / "properties.json").write_text(json.dumps(report, indent=2) + "\n")
        if not args.no_figures:
            from . import plots
            plots.surface_figure(table, str(out / "surface.png"))
    else:
        sys.stdout.write(csv_text)
    n_conv = sum(s.converged for s in table)
    print(f"cells={len(table)} converged={n_conv} all_properties_ok={report['all_ok']}")
    return EXIT_OK if n_conv == len(table) else EXIT_NUMERIC


def _print_check(name: str, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def cmd_check_rearrange(args) -> int:
    rng = np.random.default_rng(args.seed)
    g = Grid(args.L, args.n)
    ok = True

    worst_hl = np.inf
    for _ in range(args.cases):
        f = SampledField(_random_bumps(rng, g, allow_boundary=True), g)
        h = SampledField(_random_bumps(rng, g, allow_boundary=True), g)
        lhs, rhs = rearrange.check_hardy_littlewood(f, h)
        worst_hl = min(worst_hl, rhs - lhs)
    ok &= _print_check("hardy_littlewood", worst_hl >= -1e-12,
                       f"{args.cases} cases, worst slack {worst_hl:.3e}")

    worst_eq = 0.0
    for _ in range(args.cases):
        f = SampledField(_random_bumps(rng, g, allow_boundary=True), g)
        fr = rearrange.rearrange_decreasing(f)
        worst_eq = max(worst_eq, float(np.max(np.abs(
            np.sort(f.values) - np.sort(fr.values)))))
    ok &= _print_check("equimeasurability", worst_eq == 0.0,
                       f"{args.cases} cases, bit-exact multiset match")

    worst_ps = -np.inf
    for _ in range(args.cases):
        f = SampledField(_random_bumps(rng, g, allow_boundary=False), g)
        lhs, rhs = rearrange.check_polya_szego(f)
        worst_ps = max(worst_ps, lhs - rhs)
    ps_slack = 1e-8 + 2.0 * g.h
    ok &= _print_check("polya_szego", worst_ps <= ps_slack,
                       f"{args.cases} cases, worst excess {worst_ps:.3e} "
                       f"(allowed {ps_slack:.3e})")

    worst_tb = -np.inf
    n_tb = max(1, args.cases // 5)
    for _ in range(n_tb):
        f, h, shift = _random_disjoint_bumps(rng, g)
        lhs, rhs = rearrange.check_two_bump_gap(f, h, shift)
        worst_tb = max(worst_tb, lhs - rhs)
    ok &= _print_check("two_bump_gap", worst_tb <= 2.0 * g.h,
                       f"{n_tb} cases, worst excess {worst_tb:.3e}")
    return EXIT_OK if ok else EXIT_NUMERIC


def _random_bumps(rng, g: Grid, allow_boundary: bool) -> np.ndarray:
    vals = np.zeros(g.n_points)
    for _ in range(rng.integers(1, 4)):
        center = rng.uniform(-g.half_width * 0.6, g.half_width * 0.6)
        width = rng.uniform(0.5, 3.0)
        vals += rng.uniform(0.1, 1.0) * np.exp(-((g.x - center) / width) ** 2)
    if not allow_boundary:
        vals[0] = vals[-1] = 0.0
    return vals


def _random_disjoint_bumps(rng, g: Grid):
    w1 = rng.uniform(0.5, 2.0)
    w2 = rng.uniform(0.5, 2.0)
    f = np.maximum(0.0, 1.0 - (g.x / w1) ** 2) ** 2 * rng.uniform(0.2, 1.0)
    h = np.maximum(0.0, 1.0 - (g.x / w2) ** 2) ** 2 * rng.uniform(0.2, 1.0)
    need = int(np.ceil((w1 + w2) / g.h)) // 2 + 2
    shift = int(rng.integers(need, need + g.n_points // 8))
    return SampledField(f, g), SampledField(h, g), shift


def cmd_check_scalar(args) -> int:
    g = Grid(args.L, args.n)
    ok = True
    for c in (0.0, 0.6, 1.0, 1.3):
        e = functionals.energy(scalar.build_scalar(c, g).state(),
                               ConstraintTargets(q=0.1, m=0.0))
        err = abs(e - scalar.scalar_energy(c))
        ok &= _print_check(f"energy_law c={c}", err < 2e-3,
                           f"E={e:.8f} closed={scalar.scalar_energy(c):.8f} "
                           f"err={err:.2e}")
    for q in (0.1, 0.3, 0.6, 0.9, 1.2, 1.5):
        c = scalar.speed_of_momentum(q, g)
        bound = np.sqrt(2.0) * q - scalar.scalar_energy(c)
        ok &= _print_check(f"energy_below_sqrt2q q={q}", bound > 0,
                           f"margin {bound:.4e}")
    sol = scalar.build_scalar(1.0, g)
    _, _, norm = tws.ode_residual(sol.state(), 1.0, 0.0,
                                  ConstraintTargets(q=0.1, m=0.0))
    ok &= _print_check("ode_residual c=1", norm < 20.0 * g.h ** 2,
                       f"norm {norm:.3e} (h^2 = {g.h**2:.1e})")
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_check_residual(args) -> int:
    try:
        state = PairState.from_json(Path(getattr(args, "in")).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise _InputError(f"--in: cannot read profile: {exc}")
    t = ConstraintTargets(q=max(functionals.momentum(state), 1e-6),
                          m=functionals.mass(state),
                          alpha=args.alpha, beta=args.beta)
    lam = getattr(args, "lambda")
    _, _, norm = tws.ode_residual(state, args.c, lam, t)
    fi = tws.interior_max(tws.first_integral_residual(state, args.c, lam, t))
    ok = _print_check("ode_residual", norm <= args.ode_tol,
                      f"norm {norm:.3e} (tol {args.ode_tol:g})")
    ok &= _print_check("first_integral", fi <= args.fi_tol,
                       f"max {fi:.3e} (tol {args.fi_tol:g})")
    return EXIT_OK if ok else EXIT_NUMERIC


def build_parser() -> _Parser:
    parser = _Parser(prog="gpsol", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="one constrained minimization")
    p_solve.add_argument("--q", type=float, required=True)
    p_solve.add_argument("--m", type=float, default=0.0)
    _add_numeric_flags(p_solve)
    p_solve.add_argument("--out", type=str, default=None)
    p_solve.add_argument("--format", choices=("json", "csv"), default="json")
    p_solve.add_argument("--profiles", action="store_true")
    p_solve.add_argument("--trace", action="store_true")
    p_solve.add_argument("--no-figures", action="store_true")
    p_solve.add_argument("--config", type=str, default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="minimizing-surface sweep")
    p_sweep.add_argument("--q-list", type=str, default="0.15,0.3,0.45,0.6")
    p_sweep.add_argument("--m-list", type=str, default="0,0.1,0.2,0.4")
    p_sweep.add_argument("--restarts", type=int, default=3)
    p_sweep.add_argument("--jobs", type=int,
                         default=int(os.environ.get("GPSOL_THREADS", "1")))
    p_sweep.add_argument("--ptol", type=float, default=2e-3,
                         help="tolerance for surface property checks")
    _add_numeric_flags(p_sweep)
    p_sweep.add_argument("--out", type=str, default=None)
    p_sweep.add_argument("--no-figures", action="store_true")
    p_sweep.add_argument("--config", type=str, default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_check = sub.add_parser("check", help="verification suites")
    check_sub = p_check.add_subparsers(dest="check_command", required=True)

    p_re = check_sub.add_parser("rearrange", help="rearrangement inequality suite")
    p_re.add_argument("--cases", type=int, default=1000)
    p_re.add_argument("--seed", type=int, default=0)
    p_re.add_argument("--L", type=float, default=20.0)
    p_re.add_argument("--n", type=int, default=801)
    p_re.set_defaults(func=cmd_check_rearrange)

    p_sc = check_sub.add_parser("scalar", help="explicit-soliton reference suite")
    p_sc.add_argument("--L", type=float, default=40.0)
    p_sc.add_argument("--n", type=int, default=16001)
    p_sc.set_defaults(func=cmd_check_scalar)

    p_res = check_sub.add_parser("residual", help="traveling-wave residuals of a stored profile")
    p_res.add_argument("--in", type=str, required=True)
    p_res.add_argument("--c", type=float, required=True)
    p_res.add_argument("--lambda", type=float, required=True)
    p_res.add_argument("--alpha", type=float, default=1.0)
    p_res.add_argument("--beta", type=float, default=1.0)
    p_res.add_argument("--ode-tol", type=float, default=1e-3)
    p_res.add_argument("--fi-tol", type=float, default=1e-3)
    p_res.set_defaults(func=cmd_check_residual)

    return parser


def _apply_config_file(argv: list[str], parser: _Parser) -> list[str]:
    """--config JSON supplies defaults; explicit flags override."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        parser.error("--config needs a path")
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        parser.error(f"--config: {exc}")
    injected: list[str] = []
    for key, value in payload.items():
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue
        if isinstance(value, bool):
            if value:
                injected.append(flag)
        else:
            injected.extend([flag, str(value)])
    return argv[:1] + injected + argv[1:]


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] in ("solve", "sweep"):
        argv = [argv[0]] + _apply_config_file(argv[1:], parser)
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _InputError as exc:
        print(f"gpsol: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"gpsol: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
