"""
Command-line entry point: ``mfdma {generate,analyze,compare,hurst-bench,volatility}``.

Exit codes: 0 success, 2 invalid input or parameters, 3 tolerance exceeded
in ``compare``.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import analysis, ingest, synth
from .core import MFDMAError, QGrid, ScaleGrid

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE = 0, 2, 3


# -- file formats -----------------------------------------------------------


def write_series(path, x):
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(f"{float(v)!r}\n" for v in x)


def write_surface(path, X):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        for row in X:
            w.writerow([repr(float(v)) for v in row])


def read_data(path) -> np.ndarray:
    """Load a series (one value per line) or a surface (CSV matrix)."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(c) for c in line.split(",")])
            except ValueError:
                raise ingest.ParseError(f"non-numeric value in {line!r}", lineno) from None
    if not rows:
        raise MFDMAError(f"{path}: no data")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise MFDMAError(f"{path}: ragged rows")
    data = np.array(rows)
    return data[:, 0] if widths == {1} else data


# -- argument helpers ------------------------------------------------------


def _pair(text):
    parts = text.replace(":", ",").split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    return int(float(parts[0])), int(float(parts[1]))


def _scales(text):
    """``LO:HI:COUNT`` for a log-spaced grid, else a comma list."""
    if ":" in text:
        lo, hi, n = text.split(":")
        return ("log", int(lo), int(hi), int(n))
    return ("list", [int(v) for v in text.split(",")])


def _qgrid(args) -> QGrid:
    return QGrid.linspace(args.q_min, args.q_max, args.q_step)


def _scale_grid(args, data) -> ScaleGrid:
    choice = args.scales
    if choice is None:
        sg = ScaleGrid.default_1d(data.size) if data.ndim == 1 else ScaleGrid.default_2d(data.shape)
    elif choice[0] == "log":
        sg = ScaleGrid.logspace(choice[1], choice[2], choice[3])
    else:
        sg = ScaleGrid(choice[1])
    if args.fit_range is not None:
        sg = sg.with_fit_range(*args.fit_range)
    return sg


def _add_grid_args(p):
    p.add_argument("--theta", default="0", help="0..1 or backward|centered|forward")
    p.add_argument("--q-min", type=float, default=-5.0)
    p.add_argument("--q-max", type=float, default=5.0)
    p.add_argument("--q-step", type=float, default=0.25)
    p.add_argument("--scales", type=_scales, help="LO:HI:COUNT (log-spaced) or s1,s2,...")
    p.add_argument("--fit-range", type=_pair, help="LO,HI inclusive scale range for all fits")


def _theta_arg(text):
    try:
        return float(text)
    except ValueError:
        return text


# -- commands -----------------------------------------------------------------


def cmd_generate(args):
    if args.kind == "pmodel1d":
        write_series(args.out, synth.pmodel_1d(args.p1, args.k))
    elif args.kind == "pmodel2d":
        write_surface(args.out, synth.pmodel_2d(args.p, args.k))
    else:
        write_series(args.out, synth.fbm(args.H, args.n, seed=args.seed))
    return EXIT_OK


def cmd_analyze(args):
    data = read_data(args.input)
    if args.dim is not None and data.ndim != args.dim:
        raise MFDMAError(f"input is {data.ndim}D but --dim {args.dim} was given")
    ranges = {}
    for key in ("tau", "alpha", "f"):
        r = getattr(args, f"fit_range_{key}")
        if r is not None:
            ranges[key] = r
    rep = analysis.analyze(data, _theta_arg(args.theta), args.approach, _qgrid(args),
                           _scale_grid(args, data), ranges or None, args.oracle_p)
    if args.format == "json":
        doc = {
            "config": rep.config,
            "fluctuation_sha256": rep.digest,
            "rows": {a: [{k: float(v) for k, v in row.items()} for row in rep.rows(a)]
                     for a in rep.results},
        }
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
        paths = [args.out]
    else:
        paths = analysis.write_report(rep, args.out)
    print(f"fluctuation sha256 {rep.digest}", file=sys.stderr)
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_compare(args):
    if args.report.endswith(".json"):
        with open(args.report) as fh:
            doc = json.load(fh)
        rows = {a: {k: np.array([r[k] for r in rs]) for k in rs[0]}
                for a, rs in doc["rows"].items()}
    else:
        rows = analysis.read_report_rows(args.report)
    table, ok = analysis.compare_to_oracle(rows, args.p, args.tol)
    w = csv.writer(sys.stdout)
    w.writerow(["approach", "q", "delta_tau", "delta_alpha"])
    for r in table:
        w.writerow([r["approach"], f"{r['q']:g}", f"{r['delta_tau']:.6g}", f"{r['delta_alpha']:.6g}"])
    if not ok:
        print(f"max |delta tau| exceeds tolerance {args.tol}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_hurst_bench(args):
    bench = analysis.hurst_bench(args.H, args.runs, args.n, _theta_arg(args.theta),
                                 args.seed, _qgrid(args))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["H_in", "approach", "q", "h_mean", "h_std"])
        for H in args.H:
            for a, stats in bench[H].items():
                for q, m, s in zip(bench["q"], stats["mean"], stats["std"]):
                    w.writerow([H, a, repr(float(q)), repr(float(m)), repr(float(s))])
    print(args.out)
    return EXIT_OK


def cmd_volatility(args):
    prices = ingest.read_prices(args.input, args.instrument)
    vol = ingest.volatility(prices, drop_session_gaps=args.drop_session_gaps)
    write_series(args.out, vol.values)
    print(f"{vol.count} returns from {vol.start} to {vol.end}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mfdma", description="Multifractal moving-average analysis.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic series or surface")
    g.add_argument("kind", choices=("pmodel1d", "pmodel2d", "fbm"))
    g.add_argument("-o", "--out", required=True)
    g.add_argument("--p1", type=float, default=0.3)
    g.add_argument("--p", type=float, nargs=4, default=(0.1, 0.2, 0.3, 0.4))
    g.add_argument("--k", type=int, default=16)
    g.add_argument("--H", type=float, default=0.7)
    g.add_argument("--n", type=int, default=65536)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="estimate the multifractal spectrum of a file")
    a.add_argument("input")
    a.add_argument("-o", "--out", required=True, help="report path (stem for csv output)")
    a.add_argument("--dim", type=int, choices=(1, 2))
    a.add_argument("--approach", choices=("traditional", "direct", "both"), default="both")
    _add_grid_args(a)
    a.add_argument("--fit-range-tau", type=_pair)
    a.add_argument("--fit-range-alpha", type=_pair)
    a.add_argument("--fit-range-f", type=_pair)
    a.add_argument("--oracle-p", type=float, nargs="+",
                   help="cascade proportions for analytic columns (p1, or four values in 2D)")
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("compare", help="deviations of a report from the cascade oracle")
    c.add_argument("report")
    c.add_argument("--p", type=float, nargs="+", required=True)
    c.add_argument("--tol", type=float)
    c.set_defaults(func=cmd_compare)

    h = sub.add_parser("hurst-bench", help="ensemble h(q) on synthetic fGn")
    h.add_argument("-o", "--out", required=True)
    h.add_argument("--H", type=float, nargs="+", default=[0.3, 0.5, 0.7])
    h.add_argument("--runs", type=int, default=100)
    h.add_argument("--n", type=int, default=65536)
    h.add_argument("--theta", default="0.5")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--q-min", type=float, default=-5.0)
    h.add_argument("--q-max", type=float, default=5.0)
    h.add_argument("--q-step", type=float, default=0.25)
    h.set_defaults(func=cmd_hurst_bench)

    v = sub.add_parser("volatility", help="absolute log returns of a price CSV")
    v.add_argument("input")
    v.add_argument("-o", "--out", required=True)
    v.add_argument("--instrument")
    v.add_argument("--drop-session-gaps", action="store_true")
    v.set_defaults(func=cmd_volatility)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MFDMAError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
