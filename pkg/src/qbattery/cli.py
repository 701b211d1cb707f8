"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 verification failure.
Energies are in arbitrary units; ``tau`` and ``hbar`` only enter as ``tau/hbar``.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from pathlib import Path

import numpy as np

from .cycle import cycle_report
from .errors import ModelFileError, OracleSizeError, ParameterError, QBatteryError
from .figures import (
    FIG1_COLUMNS,
    FIG2_COLUMNS,
    FIG3_COLUMNS,
    FIG3_X,
    FIG12_BETA_H,
    SWEEP_COLUMNS,
    fig1_rows,
    fig2_rows,
    fig3_rows,
    sweep_rows,
)
from .modelfile import load_custom_model
from .models import ModelParams1Q, ModelParams2Q, build_1q, build_2q, build_thermal_1q
from .oracle import enumerate_trajectories, oracle_distributions, verify_reduction
from .output import write_table
from .stats import (
    efficiency_distribution,
    energy_work_heat_distributions,
    equilibrium_populations,
    passive_populations,
    stationary_table,
    trajectory_table,
    transition_matrix,
)

EXIT_USAGE, EXIT_VALIDATION, EXIT_VERIFICATION = 1, 2, 3
ORACLE_MAX_L = 3
ORACLE_TOL = 1e-9

DEFAULTS = {"beta": 1.0, "h": 1.0, "a": 1.0, "J": 1.0, "Jp": 1.0, "tau": 1.0, "hbar": 1.0}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_L(text: str):
    if text.lower() in ("inf", "infinity"):
        return None
    try:
        L = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"L must be a non-negative integer or 'inf', got {text!r}") from None
    if L < 0:
        raise argparse.ArgumentTypeError("L must be non-negative")
    return L


def _add_model_args(p: argparse.ArgumentParser, default_L="inf"):
    p.add_argument("--model", choices=["1q", "thermal-1q", "2q", "custom"], default="1q")
    p.add_argument("--model-file", type=Path, help="model file for --model custom")
    for name in DEFAULTS:
        p.add_argument(f"--{name}", type=float, default=None, help=f"default {DEFAULTS[name]:g}")
    p.add_argument("--L", type=_parse_L, default=_parse_L(default_L), help="number of collisions or 'inf'")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", type=Path, help="output file (default: standard output)")


def _value(args, name):
    v = getattr(args, name, None)
    return DEFAULTS[name] if v is None else v


def _params(args):
    kw = {k: _value(args, k) for k in ("tau", "hbar", "beta")}
    if args.model in ("1q", "thermal-1q"):
        return ModelParams1Q(h=_value(args, "h"), a=_value(args, "a"), **kw)
    return ModelParams2Q(h=_value(args, "h"), J=_value(args, "J"), Jp=_value(args, "Jp"), **kw)


def _model(args):
    if args.model == "custom":
        if args.model_file is None:
            raise UsageError("--model custom requires --model-file")
        return load_custom_model(args.model_file)
    builder = {"1q": build_1q, "thermal-1q": build_thermal_1q, "2q": build_2q}[args.model]
    return builder(_params(args))


def _metadata(args, **extra) -> dict:
    meta = {"command": args.command, "model": args.model}
    if args.model == "custom":
        meta["model_file"] = str(args.model_file)
    else:
        names = ("beta", "h", "a", "tau", "hbar") if args.model != "2q" else ("beta", "h", "J", "Jp", "tau", "hbar")
        meta.update({k: _value(args, k) for k in names})
    if hasattr(args, "L"):
        meta["L"] = "inf" if args.L is None else str(args.L)
    meta.update(extra)
    return meta


@contextlib.contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_cycle(args) -> int:
    model = _model(args)
    es = model.structure()
    rep = cycle_report(es, model.spec.beta)
    eta = rep.efficiency if rep.active else "inactive"
    with _sink(args.output) as out:
        write_table(
            out, args.format, _metadata(args), ["ergotropy", "recharging_work", "eta_th"],
            [[rep.ergotropy, rep.recharging_work, eta]],
        )
    return 0


def cmd_distributions(args) -> int:
    model = _model(args)
    es = model.structure()
    beta = model.spec.beta
    if args.kind == "efficiency":
        if args.L is not None:
            raise UsageError(
                "the efficiency distribution needs --L inf: only the complete recharge closes the cycle"
            )
        dist = efficiency_distribution(es, beta)
    else:
        if args.L is None:
            table = stationary_table(es, beta)
        else:
            init = passive_populations(es, beta) if args.initial == "passive" else equilibrium_populations(es, beta)
            table = trajectory_table(transition_matrix(model.spec, es), init, args.L)
        dist = getattr(energy_work_heat_distributions(table, es), args.kind)
    meta = _metadata(args, kind=args.kind, initial=args.initial)
    with _sink(args.output) as out:
        write_table(out, args.format, meta, ["value", "prob"], list(dist.rows()))
    return 0


def _grid(args, default):
    if args.start is None and args.stop is None and args.points is None:
        return default
    start = args.start if args.start is not None else float(default[0])
    stop = args.stop if args.stop is not None else float(default[-1])
    points = args.points if args.points is not None else len(default)
    if points < 1:
        raise UsageError("--points must be positive")
    return np.linspace(start, stop, points)


def cmd_sweep(args) -> int:
    L = args.L
    if args.preset == "fig1":
        tables = {"fig1": (FIG1_COLUMNS, fig1_rows(_grid(args, FIG12_BETA_H)))}
        split = {"fig1a.csv": FIG1_COLUMNS[:3], "fig1b.csv": [FIG1_COLUMNS[0]] + FIG1_COLUMNS[3:]}
        meta = {"command": "sweep", "preset": "fig1", "model": "1q"}
    elif args.preset == "fig2":
        tables = {"fig2": (FIG2_COLUMNS, fig2_rows(_grid(args, FIG12_BETA_H)))}
        split = {"fig2a.csv": FIG2_COLUMNS[:5], "fig2b.csv": [FIG2_COLUMNS[0]] + FIG2_COLUMNS[5:]}
        meta = {"command": "sweep", "preset": "fig2", "model": "2q", "h": 0.6, "J": 1.0, "Jp": 1.0}
    elif args.preset == "fig3":
        if L is None:
            raise UsageError("--preset fig3 needs a finite --L")
        tables = {"fig3": (FIG3_COLUMNS, fig3_rows(L, _grid(args, FIG3_X), jobs=args.jobs))}
        split = {f"fig3_L{L}.csv": FIG3_COLUMNS}
        meta = {"command": "sweep", "preset": "fig3", "model": "2q", "beta": 1.0, "tau_over_hbar": 1.0,
                "J": "x", "Jp": "x", "h": "0.6x", "L": str(L)}
    else:
        if args.var is None:
            raise UsageError("sweep without --preset needs --var, --from, --to and --points")
        if args.model == "custom":
            raise UsageError("parameter sweeps need a bundled model")
        if args.model in ("1q", "thermal-1q") and args.var in ("J", "Jp"):
            raise UsageError(f"--var {args.var} does not apply to --model {args.model}")
        if args.model == "2q" and args.var == "a":
            raise UsageError("--var a does not apply to --model 2q")
        if args.start is None or args.stop is None or args.points is None:
            raise UsageError("--var needs --from, --to and --points")
        values = np.linspace(args.start, args.stop, args.points)
        params = _params(args)
        for v in (values[0], values[-1]):
            # surface constraint violations as usage errors before spawning work
            type(params)(**{**params.__dict__, args.var: v})
        rows = sweep_rows(args.model, params, args.var, values, L, jobs=args.jobs)
        header = [args.var] + SWEEP_COLUMNS
        with _sink(args.output) as out:
            write_table(out, args.format, _metadata(args, var=args.var), header, rows)
        return 0

    (name, (header, rows)), = tables.items()
    if args.outdir is not None:
        args.outdir.mkdir(parents=True, exist_ok=True)
        for fname, cols in split.items():
            idx = [header.index(c) for c in cols]
            with open(args.outdir / fname, "w", newline="") as fh:
                write_table(fh, "csv", meta, cols, ([r[i] for i in idx] for r in rows))
        return 0
    with _sink(args.output) as out:
        write_table(out, args.format, meta, header, rows)
    return 0


def cmd_oracle_check(args) -> int:
    if args.L is None or args.L > ORACLE_MAX_L:
        raise OracleSizeError(f"oracle-check supports 0 <= L <= {ORACLE_MAX_L} (got {args.L if args.L is not None else 'inf'})")
    model = _model(args)
    es = model.structure()
    beta = model.spec.beta
    rep = verify_reduction(model.spec, es, args.L)
    p_ini = passive_populations(es, beta)
    oracle = oracle_distributions(enumerate_trajectories(model.spec, p_ini, args.L, es.basis))
    reduced = energy_work_heat_distributions(
        trajectory_table(transition_matrix(model.spec, es), p_ini, args.L), es
    )
    dist_err = max(o.max_abs_difference(r) for o, r in zip(oracle, reduced))
    worst = max(rep.discrepancy, dist_err)
    status = "pass" if worst <= ORACLE_TOL else "fail"
    rows = [
        ["heat_selection_rule", rep.heat_discrepancy],
        ["marginal_table", rep.marginal_discrepancy],
        ["distributions", dist_err],
    ]
    with _sink(args.output) as out:
        write_table(out, args.format, _metadata(args, status=status), ["check", "max_discrepancy"], rows)
    if status == "fail" and rep.worst_trajectory is not None:
        print(f"violating trajectory: {rep.worst_trajectory}", file=sys.stderr)
    return 0 if status == "pass" else EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qbattery", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cycle", help="ergotropy, recharging work and thermodynamic efficiency")
    _add_model_args(p)
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("distributions", help="exact distribution of work, heat, energy or efficiency")
    _add_model_args(p)
    p.add_argument("--kind", choices=["work", "heat", "energy", "efficiency"], required=True)
    p.add_argument("--initial", choices=["passive", "equilibrium"], default="passive",
                   help="initial populations for finite L: passive (recharging) or equilibrium")
    p.set_defaults(func=cmd_distributions)

    p = sub.add_parser("sweep", help="parameter sweeps and figure data")
    _add_model_args(p, default_L="20")
    p.add_argument("--preset", choices=["fig1", "fig2", "fig3", "none"], default="none")
    p.add_argument("--var", choices=list(DEFAULTS))
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--outdir", type=Path, help="write the split figure CSV files into this directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", help="compare composite-space enumeration with the reduced statistics")
    _add_model_args(p, default_L="1")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.preset != "none" and args.var is not None:
        parser.error("--var cannot be combined with --preset")
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"qbattery: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelFileError, OracleSizeError, QBatteryError) as exc:
        print(f"qbattery: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
