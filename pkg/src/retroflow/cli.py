"""Batch command-line entry points.

Subcommands: `assimilate` (backward march then forward re-evolution of an
image-derived stream function), `linear-verify` (stability scan plus
forward/backward error-bound verification on the frozen-coefficient
problem), `analyze` (uncertainty and error-budget calculators) and `serve`
(HTTP facade for the tuning console).

Every failure path exits nonzero after printing a single machine-parseable
line `error[<kind>]: <message>` to stderr.  Exit codes: 1 parameter or
verification failure, 2 divergence, 3 ingestion.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, datasets, imageio
from .dynamics import MarchConfig, linear_exact_solution, linear_march
from .errors import (DivergenceError, IngestionError, ParameterError,
                     RetroflowError)
from .fields import GridSpec, ScalarField, l2_norm, sample
from .pipeline import run_assimilation
from .spectral import (LinearSymbolConfig, apply_P, apply_linear_symbol,
                       gamma_floor, select_lambda_J, verify_lemma1)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGED = 2
EXIT_INGESTION = 3


def _fail(kind: str, message: str, code: int) -> int:
    print(f"error[{kind}]: {message}", file=sys.stderr)
    return code


def _write_norm_log(path: Path, phases) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["phase", "step", "time", "psi", "u", "v", "omega",
                    "speed_max"])
        for phase, traj in phases:
            for r in traj.norm_history:
                w.writerow([phase, r.step, f"{r.time:.12g}",
                            *(f"{x:.12g}" if x is not None else ""
                              for x in (r.psi, r.u, r.v, r.omega, r.speed_max))])


def _write_images(out: Path, name: str, field, render: str) -> None:
    img = imageio.field_to_image(field, mode=render)
    imageio.save_png(img, out / f"{name}.png")
    imageio.save_pgm(img, out / f"{name}.pgm")


def cmd_assimilate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if args.input:
            img = imageio.load_image(args.input)
        elif args.dataset:
            img = datasets.get_dataset(args.dataset, args.n)
        else:
            return _fail("parameter", "one of --input/--dataset is required",
                         EXIT_ERROR)
        psi = imageio.intensity_to_stream(img, taper_width=args.taper)
    except (IngestionError, KeyError) as err:
        return _fail("ingestion", str(err), EXIT_INGESTION)

    try:
        result = run_assimilation(
            psi, t_final=args.T, steps=args.steps, gamma=args.gamma, p=args.p,
            nu=args.nu, raw_xi=args.xi, raw_eta=args.eta,
            taper_width=args.taper, snapshot_stride=args.stride)
    except ParameterError as err:
        return _fail("parameter", str(err), EXIT_ERROR)
    except DivergenceError as err:
        phase = "backward" if err.trajectory.direction == "backward" else "forward"
        _write_norm_log(out / "norms.csv", [(phase, err.trajectory)])
        (out / "report.txt").write_text(
            f"status=diverged\nphase={phase}\nfailed_step={err.step_index}\n"
            f"norm_tail={','.join('%.6g' % x for x in err.norm_tail)}\n")
        return _fail("divergence",
                     f"march diverged at step {err.step_index} ({phase})",
                     EXIT_DIVERGED)

    _write_images(out, "desiredT", result.desired.psi, args.render)
    _write_images(out, "computed0", result.computed0.psi, args.render)
    _write_images(out, "evolvedT", result.evolved.psi, args.render)
    (out / "report.txt").write_text("status=done\n" + result.report.to_text())
    (out / "report.json").write_text(result.report.to_json())
    _write_norm_log(out / "norms.csv", [("backward", result.backward),
                                        ("forward", result.forward)])
    print(result.report.to_text(), end="")
    return EXIT_OK


def _verify_modes(grid):
    modes = {(1, 0): 0.7, (0, 1): 0.6, (1, 1): 0.5, (2, 1): 0.3}
    x, y = grid.mesh()
    f = np.zeros_like(x)
    for (j, k), amp in modes.items():
        f += amp * np.cos(2 * np.pi * (j * x + k * y))
    return ScalarField(grid, f)


def cmd_linear_verify(args) -> int:
    grid = GridSpec(args.n)
    sym = LinearSymbolConfig(a=args.a, b=args.b, nu=args.nu)
    try:
        J, lam_J = select_lambda_J(sym, grid)
    except RetroflowError as err:
        return _fail("parameter", str(err), EXIT_ERROR)
    gamma = args.gamma if args.gamma is not None else gamma_floor(lam_J, args.p)
    dt = args.T / args.steps

    data = _verify_modes(grid)
    cfg_f = MarchConfig.create("forward", args.T, args.steps, gamma, args.p,
                               args.nu)
    scan = verify_lemma1(cfg_f.smoother, sym, grid)

    # exact norms of the known solution (all modes decay, sup is at t = 0)
    norm_P = l2_norm(apply_P(data, args.p, args.nu))
    norm_PL = l2_norm(apply_P(apply_linear_symbol(data, sym), args.p, args.nu))
    ttt = apply_linear_symbol(
        apply_linear_symbol(apply_linear_symbol(data, sym), sym), sym)
    norm_ttt = l2_norm(ttt)
    B = analysis.lemma2_B(dt, norm_PL, norm_P)
    budget = analysis.k_constants(lam_J, args.p, args.T, dt, B,
                                  norm_P_omega=norm_P, norm_omega_ttt=norm_ttt)

    def measured_errors(direction, start, delta):
        cfg = MarchConfig.create(direction, args.T, args.steps, gamma, args.p,
                                 args.nu)
        rows = []

        def on_step(state, row):
            m = state.step_index
            t_omega = state.time
            t_theta = t_omega - cfg.dt
            e_th = l2_norm(ScalarField(grid, state.theta.values
                                       - linear_exact_solution(data, sym, t_theta).values))
            e_om = l2_norm(ScalarField(grid, state.omega.values
                                       - linear_exact_solution(data, sym, t_omega).values))
            n_exponent = m if direction == "forward" else m - 1
            bound = analysis.theorem_error_bound(n_exponent, budget, delta,
                                                 direction)
            rows.append((m, math.hypot(e_th, e_om), bound))

        linear_march(start, sym, cfg, on_step=on_step)
        return rows

    # forward: initial error is the Euler-init truncation
    euler = ScalarField(grid, data.values
                        + dt * apply_linear_symbol(data, sym).values)
    e1 = l2_norm(ScalarField(grid, linear_exact_solution(data, sym, dt).values
                             - euler.values))
    rows_f = measured_errors("forward", data, e1)

    # backward: hypothetical data is the exact terminal state, so the data
    # error comes only from its Euler half-step
    gdata = linear_exact_solution(data, sym, args.T)
    geuler = ScalarField(grid, gdata.values
                         - dt * apply_linear_symbol(gdata, sym).values)
    delta_b = l2_norm(ScalarField(
        grid, geuler.values - linear_exact_solution(data, sym, args.T - dt).values))
    rows_b = measured_errors("backward", gdata, delta_b)

    ratio_f = max(m / b for _, m, b in rows_f)
    ratio_b = max(m / b for _, m, b in rows_b)
    # the first backward state reproduces delta exactly; allow roundoff
    bounds_pass = ratio_f <= 1.0 + 1e-12 and ratio_b <= 1.0 + 1e-12

    print(scan.to_text(), end="")
    for key, val in (("gamma", gamma), ("J", J), ("lambda_J", lam_J),
                     ("E1", e1), ("delta_backward", delta_b),
                     ("forward_max_ratio", ratio_f),
                     ("backward_max_ratio", ratio_b),
                     ("bounds_pass", str(bounds_pass).lower())):
        print(f"{key}={val:.12g}" if isinstance(val, float) else f"{key}={val}")

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "linear_verify.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "measured_forward", "bound_forward",
                        "measured_backward", "bound_backward"])
            for (s, mf, bf), (_, mb, bb) in zip(rows_f, rows_b):
                w.writerow([s, f"{mf:.12g}", f"{bf:.12g}", f"{mb:.12g}",
                            f"{bb:.12g}"])
    if not (scan.passed and bounds_pass):
        return _fail("verification",
                     "lemma-1 scan or theorem bounds violated", EXIT_ERROR)
    return EXIT_OK


def cmd_analyze(args) -> int:
    lines = []
    if args.E2 is not None:
        try:
            inp = analysis.KnopsPayneInput(E_sq=args.E2, Q_sq=args.Q2,
                                           nu=args.nu, T=args.T, M=args.M,
                                           delta=args.delta)
        except ParameterError as err:
            return _fail("parameter", str(err), EXIT_ERROR)
        if not inp.m_exceeds_delta:
            print("warning: M <= delta; the bound is uninformative",
                  file=sys.stderr)
        out = analysis.knops_payne(inp)
        t = args.t if args.t is not None else args.T / 2
        lines += [("a", out.a), ("b", out.b), ("c", out.c),
                  ("mu", out.mu(t)), ("log_gamma", out.log_gamma(t)),
                  ("gamma_factor", out.gamma(t)),
                  ("uncertainty_bound", out.bound(t))]
    if args.lambda_J is not None:
        budget = analysis.k_constants(args.lambda_J, args.p, args.T, args.dt,
                                      args.B, norm_P_omega=args.normP,
                                      norm_omega_ttt=args.normttt)
        lines += [("K1", budget.K1), ("K2", budget.K2), ("K3", budget.K3),
                  ("lambda_J_pow_minus_p", args.lambda_J ** (-args.p)),
                  ("delta_coefficient", 1 + budget.K1 ** 2)]
        if budget.K4 is not None:
            lines += [("K4", budget.K4),
                      ("total_error_bound",
                       analysis.total_error_bound(args.delta, budget))]
    if not lines:
        return _fail("parameter",
                     "supply --E2/--Q2 and/or --lambda-J inputs", EXIT_ERROR)
    for key, val in lines:
        print(f"{key}={val:.12g}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    app = create_app(runs_dir=Path(args.runs_dir), workers=args.workers)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def _apply_config_file(subparsers: dict, argv):
    """--config supplies defaults for any long flag; explicit flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        with open(known.config) as fh:
            defaults = {k.replace("-", "_"): v for k, v in json.load(fh).items()}
        for sp in subparsers.values():
            sp.set_defaults(**defaults)


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="retroflow")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("assimilate",
                        help="backward march an image, then re-evolve forward")
    pa.add_argument("--input", help="input image (PGM P5 or grayscale PNG)")
    pa.add_argument("--dataset", help="bundled dataset name instead of a file")
    pa.add_argument("--n", type=int, default=256,
                    help="grid size for --dataset")
    pa.add_argument("--T", type=float, default=6e-4)
    pa.add_argument("--steps", type=int, default=800)
    pa.add_argument("--nu", type=float, default=0.01)
    pa.add_argument("--gamma", type=float, default=4e-9)
    pa.add_argument("--p", type=float, default=3.25)
    pa.add_argument("--eta", type=float, default=0.1)
    pa.add_argument("--xi", type=float, default=0.53)
    pa.add_argument("--taper", type=int, default=8)
    pa.add_argument("--stride", type=int, default=0)
    pa.add_argument("--render", choices=("absolute", "minmax"),
                    default="absolute")
    pa.add_argument("--config", help="JSON file of flag defaults")
    pa.add_argument("--out", required=True)
    pa.set_defaults(func=cmd_assimilate)

    pv = sub.add_parser("linear-verify",
                        help="stability scan and error bounds on the "
                             "frozen-coefficient problem")
    pv.add_argument("--n", type=int, default=64)
    pv.add_argument("--nu", type=float, default=0.01)
    pv.add_argument("--a", type=float, default=1.0)
    pv.add_argument("--b", type=float, default=0.5)
    pv.add_argument("--T", type=float, default=1e-3)
    pv.add_argument("--steps", type=int, default=100)
    pv.add_argument("--p", type=float, default=3.25)
    pv.add_argument("--gamma", type=float, default=None,
                    help="override the lemma floor")
    pv.add_argument("--config", help="JSON file of flag defaults")
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_linear_verify)

    pz = sub.add_parser("analyze", help="uncertainty and error-budget numbers")
    pz.add_argument("--E2", type=float)
    pz.add_argument("--Q2", type=float)
    pz.add_argument("--nu", type=float, default=0.01)
    pz.add_argument("--T", type=float, default=1e-9)
    pz.add_argument("--t", type=float)
    pz.add_argument("--M", type=float, default=1.0)
    pz.add_argument("--delta", type=float, default=1e-6)
    pz.add_argument("--lambda-J", dest="lambda_J", type=float)
    pz.add_argument("--p", type=float, default=3.25)
    pz.add_argument("--dt", type=float, default=5e-8)
    pz.add_argument("--B", type=float, default=1.0)
    pz.add_argument("--normP", type=float)
    pz.add_argument("--normttt", type=float)
    pz.add_argument("--config", help="JSON file of flag defaults")
    pz.set_defaults(func=cmd_analyze)

    ps = sub.add_parser("serve", help="run the HTTP service")
    ps.add_argument("--host", default="127.0.0.1")
    ps.add_argument("--port", type=int, default=8710)
    ps.add_argument("--runs-dir", default="runs")
    ps.add_argument("--workers", type=int, default=2)
    ps.set_defaults(func=cmd_serve)
    return parser, {"assimilate": pa, "linear-verify": pv, "analyze": pz,
                    "serve": ps}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser, subparsers = build_parser()
    _apply_config_file(subparsers, argv)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as err:
        return _fail("parameter", str(err), EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
