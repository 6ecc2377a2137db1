"""Command-line entry points.

Subcommands:
  run         execute a flow run from a config file, write series.csv
              and snapshots into the output directory
  validate-f  print the speed-function admissibility report
  analyze     fit the exponential decay rate of a series and compare it
              against the linearized prediction
  geometry    dump the pointwise geometry table of the configured shape

Exit codes: 0 success, 2 configuration error, 3 runtime abort (reason on
stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import diagnostics as diag
from . import storage
from .config import build_run, build_speed, load_config, save_config
from .engine import run_flow
from .errors import ConfigError, FlowError
from .geometry import compute_geometry, convexity_class
from .shapes import make_shape
from .speeds import (
    BUILTIN_FAMILIES,
    log1p_control,
    validate_assumption,
)


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.out is not None:
        cfg.out_dir = args.out
    state, f, params = build_run(cfg)

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_config(cfg, out / "config.json")
    storage.write_snapshot(out / "snapshot_0000.txt", state.graph, state.t)

    result = run_flow(state, f, params)
    storage.write_series(out / "series.csv", result.records)
    storage.write_snapshot(
        out / "snapshot_0001.txt", result.final_state.graph, result.final_state.t
    )

    last = result.records[-1]
    print(
        f"status: {result.status} ({result.reason})\n"
        f"steps: {result.final_state.step_count}, t = {result.final_state.t:.6g}\n"
        f"final osc_rho = {last.osc_rho:.3e}, r_fit = {last.r_fit:.9g}\n"
        f"wrote {out / 'series.csv'}"
    )
    if result.status == "aborted":
        print(f"aborted: {result.reason}", file=sys.stderr)
        return 3
    return 0


def _cmd_validate_f(args) -> int:
    if args.family == "ln1p":
        f = log1p_control()
    else:
        if args.family in ("power", "power_log"):
            f = BUILTIN_FAMILIES[args.family](args.alpha)
        elif args.family == "power_sum":
            if not args.terms:
                raise ConfigError("power_sum needs --terms JSON like "
                                  '\'[{"a": 1, "k": 2}]\'')
            terms = [(t["a"], t["k"]) for t in json.loads(args.terms)]
            f = BUILTIN_FAMILIES[args.family](terms)
        else:
            f = BUILTIN_FAMILIES[args.family]()
    report = validate_assumption(f, (args.x_lo, args.x_hi), args.samples)
    print(report.format())
    print("overall:", "PASS" if report.all_pass else
          f"FAIL (items {report.failed_items()})")
    return 0


def _cmd_analyze(args) -> int:
    series_path = Path(args.series)
    cfg_path = Path(args.config) if args.config else series_path.parent / "config.json"
    cfg = load_config(cfg_path)
    f = build_speed(cfg.speed)

    rows = storage.read_series(series_path)
    rate = diag.fit_rate(rows, f, cfg.n)
    gap = abs(rate.lambda_fit - rate.lambda_star) / rate.lambda_star
    print(
        f"rho_inf (fitted radius) = {rate.rho_inf:.9g}\n"
        f"lambda_fit  = {rate.lambda_fit:.6g}   "
        f"(window t in [{rate.window[0]:.4g}, {rate.window[1]:.4g}], "
        f"residual {rate.residual:.2e})\n"
        f"lambda_star = {rate.lambda_star:.6g}   (linearized prediction)\n"
        f"relative gap = {gap:.3%}"
    )
    return 0


def _cmd_geometry(args) -> int:
    cfg = load_config(args.config)
    graph = make_shape(cfg.n, cfg.N, cfg.shape.kind, r=cfg.shape.r,
                       eps=cfg.shape.eps, l=cfg.shape.l, width=cfg.shape.width)
    fields = compute_geometry(graph)
    kappa_cols = "  ".join(f"{'kappa_%d' % (i + 1):>22s}" for i in range(cfg.n))
    print(f"# convexity: {convexity_class(fields)}")
    print(f"{'theta':>22s}  {'rho':>22s}  {kappa_cols}  "
          f"{'K':>22s}  {'H':>22s}  {'u':>22s}")
    for j in range(graph.N):
        kap = "  ".join(format(fields.kappa[j, i], ">22.15g") for i in range(cfg.n))
        print(f"{graph.theta[j]:>22.15g}  {graph.rho[j]:>22.15g}  {kap}  "
              f"{fields.K[j]:>22.15g}  {fields.H[j]:>22.15g}  {fields.u[j]:>22.15g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaussflow", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("run", help="execute a flow run")
    pr.add_argument("--config", required=True)
    pr.add_argument("--out", default=None, help="override config out_dir")
    pr.set_defaults(func=_cmd_run)

    pv = sub.add_parser("validate-f", help="speed admissibility report")
    pv.add_argument("--family", required=True,
                    choices=sorted(BUILTIN_FAMILIES) + ["ln1p"])
    pv.add_argument("--alpha", type=float, default=1.0)
    pv.add_argument("--terms", default=None,
                    help='JSON list of {"a": .., "k": ..} for power_sum')
    pv.add_argument("--x-lo", type=float, default=1e-3)
    pv.add_argument("--x-hi", type=float, default=1e3)
    pv.add_argument("--samples", type=int, default=2000)
    pv.set_defaults(func=_cmd_validate_f)

    pa = sub.add_parser("analyze", help="rate fit vs linearized prediction")
    pa.add_argument("--series", required=True)
    pa.add_argument("--config", default=None,
                    help="defaults to config.json next to the series file")
    pa.set_defaults(func=_cmd_analyze)

    pg = sub.add_parser("geometry", help="dump the geometry table")
    pg.add_argument("--config", required=True)
    pg.set_defaults(func=_cmd_geometry)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FlowError as exc:
        print(f"runtime abort: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
