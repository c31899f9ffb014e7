"""Command-line orchestration of simulate / exponent / threshold / verify workflows.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import numpy as np

from .config import ConfigError, RunConfig, load_config, render_config
from .lyapunov import lambda_sweep, lyapunov_exponent
from .model import default_paper_spec
from .output import (
    svg_line_chart,
    write_csv,
    write_plots,
    write_sweep_plot,
    write_trajectory_csv,
)
from .solver import simulate
from .thresholds import (
    BadBracketError,
    ClassifyConfig,
    LStarConfig,
    MuStarConfig,
    NotConvergedError,
    classify,
    find_L_star,
    find_mu_star,
    transcript_monotone,
)
from .verify import comparison_suite, manufactured_convergence, observed_orders
from .model import InitialData

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    p = _Parser(prog="wnvfront", description=__doc__)
    p.add_argument("--config", type=str, default=None, help="path to a run config file")
    p.add_argument("--out", type=str, default=None, help="output directory")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--h0", type=float, default=None)
        sp.add_argument("--mu", type=float, default=None)
        sp.add_argument("--t-end", type=float, default=None)
        sp.add_argument("--grid", type=int, default=None, help="spatial resolution J")

    sp = sub.add_parser("simulate", help="integrate the free-boundary system")
    common(sp)
    sp = sub.add_parser("lyapunov", help="one principal-exponent estimate")
    common(sp)
    sp.add_argument("--half-width", type=float, default=None, help="interval half-width L")
    sp = sub.add_parser("sweep-lambda", help="exponent sweep over half-widths")
    common(sp)
    sp.add_argument("--L-list", type=str, default=None, help="comma-separated half-widths")
    sp = sub.add_parser("find-lstar", help="bisect the exponent zero crossing")
    common(sp)
    sp = sub.add_parser("find-mustar", help="bisect the critical expansion rate")
    common(sp)
    sp.add_argument("--L-star", type=float, default=None)
    sp = sub.add_parser("classify", help="simulate and classify spreading/vanishing")
    common(sp)
    sp.add_argument("--L-star", type=float, default=None)
    sp = sub.add_parser("verify", help="convergence and comparison suites")
    common(sp)
    sub.add_parser("reproduce-paper", help="run the reference experiment battery")
    return p


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    model = cfg.model
    if getattr(args, "h0", None) is not None:
        model = replace(model, h0=args.h0)
    if getattr(args, "mu", None) is not None:
        model = replace(model, mu=args.mu)
    cfg = replace(cfg, model=model)
    solver = cfg.solver
    if getattr(args, "t_end", None) is not None:
        solver = replace(solver, t_end=args.t_end)
    if getattr(args, "grid", None) is not None:
        solver = replace(solver, J=args.grid)
    cfg = replace(cfg, solver=solver)
    if args.out is not None:
        cfg = replace(cfg, run=replace(cfg.run, out=args.out))
    elif os.environ.get("WNV_OUT"):
        cfg = replace(cfg, run=replace(cfg.run, out=os.environ["WNV_OUT"]))
    return cfg


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.run.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _default_output_times(solver) -> tuple:
    if solver.output_times:
        return solver.output_times
    return tuple(np.linspace(0.0, solver.t_end, 7))


def _simulate(cfg: RunConfig):
    spec = cfg.model_spec()
    init = cfg.initial_data()
    scfg = cfg.solver_config()
    scfg = replace(scfg, output_times=_default_output_times(scfg))
    return spec, simulate(spec, init, scfg)


def cmd_simulate(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    spec, traj = _simulate(cfg)
    write_trajectory_csv(traj, out)
    write_plots(traj, out)
    (out / "config_used.cfg").write_text(render_config(cfg), encoding="utf-8", newline="\n")
    print(f"status={traj.status} t_end={traj.t[-1]:g} width={traj.width[-1]:.4f} "
          f"supU={traj.sup_m[-1]:.3e} supV={traj.sup_n[-1]:.3e}")
    return EXIT_OK if traj.status == "completed" else EXIT_NUMERICAL


def cmd_lyapunov(cfg: RunConfig, half_width: Optional[float]) -> int:
    spec = cfg.model_spec()
    L = half_width if half_width is not None else spec.h0
    est = lyapunov_exponent(spec.linearization(), L, (spec.D1, spec.D2), cfg.estimator_config())
    print(f"lambda={est.lam:.6f} L={L:g} ci=({est.tail_slope_ci[0]:.6f},"
          f"{est.tail_slope_ci[1]:.6f}) converged={est.converged}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, l_list: Optional[str]) -> int:
    spec = cfg.model_spec()
    if l_list:
        Ls = [float(v) for v in l_list.split(",")]
    elif cfg.run.L_list:
        Ls = list(cfg.run.L_list)
    else:
        Ls = list(np.linspace(0.4, 3.0, 10))
    result = lambda_sweep(spec.linearization(), (spec.D1, spec.D2), Ls, cfg.estimator_config())
    out = _outdir(cfg)
    write_csv(
        out / "lambda_sweep.csv",
        ["L", "lambda", "ci_lo", "ci_hi"],
        [(L, e.lam, e.tail_slope_ci[0], e.tail_slope_ci[1]) for L, e in result.entries],
    )
    write_sweep_plot(result.entries, out / "lambda_vs_L.svg")
    for L, e in result.entries:
        print(f"L={L:g} lambda={e.lam:.6f} converged={e.converged}")
    if result.violations:
        print(f"monotonicity violations: {result.violations}", file=sys.stderr)
    return EXIT_OK


def _lstar_config(cfg: RunConfig) -> LStarConfig:
    return LStarConfig(estimator=cfg.search_estimator_config(), shifts=cfg.run.shifts)


def cmd_find_lstar(cfg: RunConfig) -> int:
    spec = cfg.model_spec()
    L_star, iters = find_L_star(
        spec.linearization(), (spec.D1, spec.D2), (cfg.run.L_lo, cfg.run.L_hi), _lstar_config(cfg)
    )
    print(f"L_star={L_star:.4f} iterations={iters}")
    return EXIT_OK


def _resolve_lstar(cfg: RunConfig, given: Optional[float]) -> float:
    if given is not None:
        return given
    spec = cfg.model_spec()
    L_star, _ = find_L_star(
        spec.linearization(), (spec.D1, spec.D2), (cfg.run.L_lo, cfg.run.L_hi), _lstar_config(cfg)
    )
    return L_star


def cmd_find_mustar(cfg: RunConfig, l_star: Optional[float]) -> int:
    L_star = _resolve_lstar(cfg, l_star)
    spec = cfg.model_spec()
    mcfg = MuStarConfig(solver=cfg.solver_config(), L_star=L_star)
    mu_star, iters, transcript = find_mu_star(
        spec, cfg.initial_data(), (cfg.run.mu_lo, cfg.run.mu_hi), mcfg
    )
    out = _outdir(cfg)
    write_csv(
        out / "mustar_transcript.csv",
        ["mu", "spreading", "t_end"],
        [(r.mu, 1.0 if r.verdict == "Spreading" else 0.0, r.t_end) for r in transcript],
    )
    print(f"mu_star={mu_star:.4f} iterations={iters} monotone={transcript_monotone(transcript)}")
    return EXIT_OK


def cmd_classify(cfg: RunConfig, l_star: Optional[float]) -> int:
    L_star = _resolve_lstar(cfg, l_star)
    spec, traj = _simulate(cfg)
    if traj.status != "completed":
        print(f"numerical failure: status={traj.status}", file=sys.stderr)
        return EXIT_NUMERICAL
    cls = classify(traj, L_star)
    print(f"verdict={cls.verdict} final_width={cls.evidence['final_width']:.4f} "
          f"supU={cls.evidence['final_sup_U']:.3e}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    rows = manufactured_convergence()
    write_csv(
        out / "convergence.csv",
        ["spatial", "J", "dt", "error", "order"],
        [
            (1.0 if r["study"] == "spatial" else 0.0, r["J"], r["dt"], r["error"],
             r["order"] if np.isfinite(r["order"]) else -1.0)
            for r in rows
        ],
    )
    for r in rows:
        print(f"{r['study']:>8}  J={r['J']:<4d} dt={r['dt']:.2e} "
              f"error={r['error']:.3e} order={r['order']:.3f}")
    sp = observed_orders(rows, "spatial")
    tp = observed_orders(rows, "temporal")
    ok = all(1.9 <= o <= 2.2 for o in sp[-1:]) and all(0.9 <= o <= 1.1 for o in tp[-1:])

    spec = default_paper_spec(mu=cfg.model.mu, h0=max(cfg.model.h0, 1.0))
    scfg = replace(cfg.solver_config(), t_end=10.0, dt0=0.02, dt_min=0.02, dt_max=0.02,
                   J=200, output_times=(5.0, 10.0))
    base = InitialData(amp_U=0.08, amp_V=1.5)
    upper = InitialData(amp_U=0.12, amp_V=2.25)
    report = comparison_suite(spec, [(base, upper)], scfg)
    print(f"comparison passed={report['passed']}")
    ok = ok and report["passed"]
    print(f"verify {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY


_PAPER_CASES = ((2.0, 0.1), (1.0, 0.1), (0.6, 0.1), (0.5, 0.1), (0.6, 0.2))


def cmd_reproduce_paper(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    scfg = cfg.solver_config()
    scfg = replace(scfg, output_times=_default_output_times(scfg))

    base_spec = cfg.model_spec()
    print("estimating exponent-based critical half-width ...")
    try:
        L_star, _ = find_L_star(
            base_spec.linearization(), (base_spec.D1, base_spec.D2),
            (cfg.run.L_lo, cfg.run.L_hi), _lstar_config(cfg),
        )
    except (BadBracketError, NotConvergedError) as e:
        print(f"numerical failure in L* search: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"  L_star(lambda) = {L_star:.4f}")

    verdicts = {}
    rows = []
    for h0, mu in _PAPER_CASES:
        spec = base_spec.with_h0(h0).with_mu(mu)
        traj = simulate(spec, cfg.initial_data(), scfg)
        if traj.status != "completed":
            print(f"numerical failure: case h0={h0} mu={mu} status={traj.status}", file=sys.stderr)
            return EXIT_NUMERICAL
        cls = classify(traj, L_star)
        verdicts[(h0, mu)] = cls.verdict
        rows.append((h0, mu, 1.0 if cls.verdict == "Spreading" else 0.0,
                     cls.evidence["final_width"], cls.evidence["final_sup_U"]))
        print(f"  h0={h0:<4} mu={mu:<4} -> {cls.verdict:<12} "
              f"width={cls.evidence['final_width']:.3f} supU={cls.evidence['final_sup_U']:.2e}")
    write_csv(out / "verdicts.csv", ["h0", "mu", "spreading", "final_width", "final_supU"], rows)

    # half-width threshold bracket from the mu=0.1 sweep over h0
    mu_ref = 0.1
    van = [h0 for (h0, mu), v in verdicts.items() if mu == mu_ref and v == "Vanishing"]
    spr = [h0 for (h0, mu), v in verdicts.items() if mu == mu_ref and v == "Spreading"]
    bracket_ok = bool(van) and bool(spr) and max(van) < min(spr)
    L_bracket = (max(van), min(spr)) if bracket_ok else (float("nan"), float("nan"))
    print(f"  half-width threshold bracket from verdicts: ({L_bracket[0]:g}, {L_bracket[1]:g})")

    # expansion-rate threshold at h0 = 0.6
    spec06 = base_spec.with_h0(0.6)
    mcfg = MuStarConfig(solver=scfg, L_star=L_star)
    mu_bracket = (cfg.run.mu_lo, cfg.run.mu_hi)
    mu_star = float("nan")
    monotone = True
    mu_bracket_ok = True
    try:
        mu_star, _, transcript = find_mu_star(spec06, cfg.initial_data(), mu_bracket, mcfg)
        monotone = transcript_monotone(transcript)
        write_csv(
            out / "mustar_transcript.csv",
            ["mu", "spreading", "t_end"],
            [(r.mu, 1.0 if r.verdict == "Spreading" else 0.0, r.t_end) for r in transcript],
        )
    except BadBracketError as e:
        mu_bracket_ok = False
        print(f"mu bracket does not straddle the threshold: {e}", file=sys.stderr)
    except NotConvergedError as e:
        print(f"mu* refinement stopped early: {e}", file=sys.stderr)
    print(f"  mu threshold bracket: ({mu_bracket[0]:g}, {mu_bracket[1]:g}), "
          f"refined mu_star={mu_star:.4f}, transcript monotone={monotone}")

    write_csv(
        out / "summary.csv",
        ["L_star_lambda", "L_bracket_lo", "L_bracket_hi", "mu_lo", "mu_hi", "mu_star"],
        [(L_star, L_bracket[0], L_bracket[1], mu_bracket[0], mu_bracket[1], mu_star)],
    )
    expected = {"Spreading": [(2.0, 0.1), (1.0, 0.1), (0.6, 0.2)],
                "Vanishing": [(0.6, 0.1), (0.5, 0.1)]}
    regimes_ok = all(verdicts[c] == v for v, cases in expected.items() for c in cases)
    print(f"regimes {'PASS' if regimes_ok else 'FAIL'}; "
          f"bracket {'PASS' if bracket_ok else 'FAIL'}; "
          f"mu bracket {'PASS' if mu_bracket_ok else 'FAIL'}")
    return EXIT_OK if (regimes_ok and bracket_ok and mu_bracket_ok and monotone) else EXIT_VERIFY


def cli_main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _load(args)
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "lyapunov":
            return cmd_lyapunov(cfg, args.half_width)
        if args.command == "sweep-lambda":
            return cmd_sweep(cfg, args.L_list)
        if args.command == "find-lstar":
            return cmd_find_lstar(cfg)
        if args.command == "find-mustar":
            return cmd_find_mustar(cfg, args.L_star)
        if args.command == "classify":
            return cmd_classify(cfg, args.L_star)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "reproduce-paper":
            return cmd_reproduce_paper(cfg)
    except (BadBracketError, NotConvergedError, ArithmeticError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_USAGE


def main() -> int:
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
