"""
Command-line front end.

    securehda compute   [--config FILE] [--set key=value ...]
    securehda simulate  --scheme S --snr1a X [--trials N] [--seed S]
    securehda sweep     [--snr-min A] [--snr-max B] [--points K] [--schemes ...]
    securehda fig4      [--trials N]
    securehda exponents [--grid-min A] [--grid-max B] [--points K]

Parameters come from the config file (Fig. 4 operating point when omitted);
``--set`` overrides win over the file. Exit status is 0 on success, 2 on
usage or validation errors and 3 on numerical failures.
"""

import argparse
import io
import logging
import sys

import numpy as np

from . import _kernels
from .analytics import summary
from .mmse import SingularCovariance
from .model import (
    CONFIG_KEYS,
    ConfigError,
    MismatchPoint,
    ParameterError,
    SchemeKind,
    fig4_params,
    load_config,
    params_from_mapping,
    validate,
)
from .montecarlo import DEFAULT_BLOCK_SIZE, SimulationConfig, simulate
from .sweep import ALL_SCHEMES, InsufficientSpan, SweepSpec, exponent_grid, exponents, fig4_reproduce, run_sweep

SWEEP_HEADER = ("scheme", "snr1a", "n1a", "analytic_d", "empirical_d", "std_err", "trials", "seed")
SIMULATE_HEADER = ("scheme", "snr1a", "n1a", "analytic_d", "empirical_d", "std_err",
                   "empirical_leakage", "trials", "seed")
EXPONENT_HEADER = ("scheme", "zeta_hat", "grid_min", "grid_max")

EXIT_USAGE = 2
EXIT_NUMERIC = 3


def fmt(value):
    """Locale-independent 12-significant-digit rendering; None becomes an empty field."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def write_table(out, header, rows, sep):
    out.write(sep.join(header) + "\n")
    for row in rows:
        out.write(sep.join(fmt(v) if not isinstance(v, str) else v for v in row) + "\n")


def parse_override(text):
    key, eq, value = text.partition("=")
    key = key.strip()
    if not eq:
        raise ConfigError(f"override must be key=value, got {text!r}")
    if key not in CONFIG_KEYS:
        raise ConfigError(f"unknown override key {key!r}")
    try:
        return key, float(value)
    except ValueError:
        raise ConfigError(f"override value for {key!r} is not a number: {value!r}") from None


def resolve_params(args):
    if args.config:
        base = load_config(args.config)
    else:
        base = fig4_params()
    values = {k: getattr(base, k) for k in CONFIG_KEYS}
    for item in args.overrides:
        key, value = parse_override(item)
        values[key] = value
    return validate(params_from_mapping(values))


def snr_value(x, db):
    return 10.0 ** (x / 10.0) if db else x


def _sim_config(args):
    return SimulationConfig(trials=args.trials, seed=args.seed, block_size=args.block_size,
                            workers=args.workers)


def _curve_rows(curves):
    rows = []
    for curve in sorted(curves, key=lambda c: c.scheme.value):
        for p in sorted(curve.points, key=lambda p: p.snr1a):
            rows.append((curve.scheme.value, p.snr1a, p.n1a, p.analytic_d, p.empirical_d, p.std_err,
                         p.trials, p.seed))
    return rows


PLOT_TEMPLATE = '''\
"""Plot distortion against actual main-channel SNR from {csv}."""
import csv
import sys

import matplotlib.pyplot as plt

series = {{}}
with open({csv!r}, newline="") as fh:
    for row in csv.DictReader(fh, delimiter={sep!r}):
        s = series.setdefault(row["scheme"], ([], [], []))
        s[0].append(float(row["snr1a"]))
        s[1].append(float(row["analytic_d"]))
        s[2].append(float(row["empirical_d"]) if row["empirical_d"] else None)

fig, ax = plt.subplots()
for name, (snr, analytic, empirical) in sorted(series.items()):
    line, = ax.plot(snr, analytic, label=name)
    pts = [(x, y) for x, y in zip(snr, empirical) if y is not None]
    if pts:
        ax.plot(*zip(*pts), "o", ms=3, color=line.get_color())
ax.set_yscale("log")
ax.set_xlabel("SNR_1a (linear)")
ax.set_ylabel("distortion")
ax.legend()
ax.grid(True, which="both", alpha=0.3)
out = sys.argv[1] if len(sys.argv) > 1 else {png!r}
fig.savefig(out, dpi=150)
'''


def write_plot_script(path, csv_path, sep):
    png = str(csv_path).rsplit(".", 1)[0] + ".png"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(PLOT_TEMPLATE.format(csv=str(csv_path), sep=sep, png=png))


def cmd_compute(args, params, out, sep):
    write_table(out, ("quantity", "value"), summary(params), sep)


def cmd_simulate(args, params, out, sep):
    snr1a = snr_value(args.snr1a, args.db) if args.snr1a is not None else params.snr1
    point = MismatchPoint.from_snr(params, snr1a)
    rep = simulate(SchemeKind.parse(args.scheme), params, point, _sim_config(args))
    write_table(out, SIMULATE_HEADER, [(
        rep.scheme.value, snr1a, rep.n1a, rep.analytic_d, rep.empirical_d, rep.std_err,
        rep.empirical_leakage, rep.trials, rep.seed)], sep)


def _schemes(args):
    if not args.schemes:
        return ALL_SCHEMES
    return tuple(SchemeKind.parse(s) for s in args.schemes.split(","))


def cmd_sweep(args, params, out, sep):
    lo = snr_value(args.snr_min, args.db) if args.snr_min is not None else params.snr1
    hi = snr_value(args.snr_max, args.db) if args.snr_max is not None else 5.0 * params.snr1
    if args.points < 1:
        raise ParameterError("--points must be >= 1")
    grid = [lo] if args.points == 1 else np.linspace(lo, hi, args.points)
    cfg = _sim_config(args) if args.trials > 0 else None
    curves = run_sweep(params, SweepSpec(grid, _schemes(args), cfg))
    write_table(out, SWEEP_HEADER, _curve_rows(curves), sep)


def cmd_fig4(args, params, out, sep):
    curves = fig4_reproduce(params, trials=args.trials, seed=args.seed, block_size=args.block_size,
                            workers=args.workers)
    write_table(out, SWEEP_HEADER, _curve_rows(curves), sep)


def cmd_exponents(args, params, out, sep):
    grid = exponent_grid(snr_value(args.grid_min, args.db), snr_value(args.grid_max, args.db), args.points)
    result = exponents(params, _schemes(args), grid)
    rows = [(s.value, *result[s]) for s in sorted(result, key=lambda s: s.value)]
    write_table(out, EXPONENT_HEADER, rows, sep)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="key=value parameter file (default: Fig. 4 operating point)")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one parameter; repeatable, wins over --config")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "tsv"), default="csv")
    common.add_argument("--db", action="store_true", help="SNR flags are given in dB")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE)
    common.add_argument("--workers", type=int, default=1, help="threads for Monte-Carlo blocks")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="securehda", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="verb", required=True)

    sub.add_parser("compute", parents=[common], help="closed-form rates, powers and coefficients")

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo estimate for one scheme and SNR")
    p.add_argument("--scheme", required=True, help=", ".join(s.value for s in SchemeKind))
    p.add_argument("--snr1a", type=float, help="actual main-channel SNR (default: design SNR)")
    p.add_argument("--trials", type=int, default=1_000_000)

    p = sub.add_parser("sweep", parents=[common], help="distortion against actual SNR")
    p.add_argument("--snr-min", type=float)
    p.add_argument("--snr-max", type=float)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--schemes", help="comma-separated subset (default: all)")
    p.add_argument("--trials", type=int, default=100_000, help="0 for analytic only")
    p.add_argument("--plot-script", help="also write a matplotlib script plotting the output CSV")

    p = sub.add_parser("fig4", parents=[common], help="robustness comparison at the Fig. 4 operating point")
    p.add_argument("--trials", type=int, default=100_000, help="0 for analytic only")
    p.add_argument("--plot-script", help="also write a matplotlib script plotting the output CSV")

    p = sub.add_parser("exponents", parents=[common], help="distortion exponents on a log-spaced grid")
    p.add_argument("--grid-min", type=float, default=1e3)
    p.add_argument("--grid-max", type=float, default=1e6)
    p.add_argument("--points", type=int, default=31)
    p.add_argument("--schemes", help="comma-separated subset (default: all)")
    return parser


COMMANDS = {
    "compute": cmd_compute,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "fig4": cmd_fig4,
    "exponents": cmd_exponents,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="securehda: %(levelname)s: %(message)s")
    logging.getLogger(__name__).info("kernel backend: %s", _kernels.BACKEND)
    sep = "," if args.format == "csv" else "\t"
    plot = getattr(args, "plot_script", None)
    if plot and not args.output:
        print("securehda: error: --plot-script needs --output", file=sys.stderr)
        return EXIT_USAGE
    buf = io.StringIO()
    try:
        params = resolve_params(args)
        if getattr(args, "trials", 1) < 0:
            raise ParameterError("--trials must be >= 0")
        COMMANDS[args.verb](args, params, buf, sep)
    except (ParameterError, InsufficientSpan, ValueError) as exc:
        print(f"securehda: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularCovariance, ArithmeticError) as exc:
        print(f"securehda: numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if plot:
        write_plot_script(plot, args.output, sep)
    return 0


if __name__ == "__main__":
    sys.exit(main())
