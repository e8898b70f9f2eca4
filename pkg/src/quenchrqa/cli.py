"""Command-line front end: simulate, rp, sweep, and oracle-check subcommands."""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import ed, tfim
from .pipeline import (
    CSV_HEADER,
    build_sweep_config,
    parse_config_file,
    run_sweep,
    select_window,
)
from .recurrence import (
    EmbeddingConfig,
    TimeSeries,
    distance_matrix,
    embed,
    export_rp,
    histogram_csv,
    rqa,
    threshold_by_rate,
)


def _fmt(value):
    return repr(float(value))


def _add_simulate(subparsers):
    p = subparsers.add_parser("simulate", help="dump a correlator time series as CSV")
    p.add_argument("--L", type=int, default=128)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--t_max", type=float, default=500.0)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--observable", choices=tfim.OBSERVABLES, default="xx")
    p.add_argument("--distances", default="1", help="comma-separated distances")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")


def _cmd_simulate(args):
    distances = [int(d) for d in args.distances.split(",")]
    spec = tfim.QuenchSpec(L=args.L, h=args.h, t_max=args.t_max, dt=args.dt)
    series = tfim.simulate_series(spec, args.observable, distances)
    lines = ["t," + ",".join(f"l{d}" for d in series.distances)]
    for n, t in enumerate(series.times):
        lines.append(_fmt(t) + "," + ",".join(_fmt(v) for v in series.values[n]))
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def _add_rp(subparsers):
    p = subparsers.add_parser("rp", help="recurrence plot and histograms from a series CSV")
    p.add_argument("series_csv", help="CSV with a time column followed by value columns")
    p.add_argument("--column", default=None, help="value column name (default: first)")
    p.add_argument("--rr", type=float, default=0.10)
    p.add_argument("--window", default=None, help="LO:HI time window")
    p.add_argument("--embed_dim", type=int, default=1)
    p.add_argument("--embed_delay", type=int, default=1)
    p.add_argument("--metric", choices=("euclidean", "maximum"), default="euclidean")
    p.add_argument("--out", default=".", help="output directory")


def _read_series_csv(path, column):
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = [row for row in reader if row]
    names = [name.strip() for name in header]
    if column is None:
        index = 1
    else:
        if column not in names:
            raise SystemExit(f"column {column!r} not in {path} (have {names[1:]})")
        index = names.index(column)
    times = np.array([float(row[0]) for row in rows])
    values = np.array([float(row[index]) for row in rows])
    if len(times) < 2:
        raise SystemExit(f"{path}: need at least two samples")
    steps = np.diff(times)
    dt = steps[0]
    if not np.allclose(steps, dt, rtol=1e-9, atol=1e-9):
        raise SystemExit(f"{path}: time grid is not uniform")
    return TimeSeries(values=values, dt=float(dt), t0=float(times[0]))


def _cmd_rp(args):
    series = _read_series_csv(args.series_csv, args.column)
    if args.window:
        lo, hi = (float(part) for part in args.window.split(":"))
        series = select_window(series, lo, hi)
    config = EmbeddingConfig(dim=args.embed_dim, delay=args.embed_delay, metric=args.metric)
    trajectory = embed(series, config)
    _, plot = threshold_by_rate(distance_matrix(trajectory, args.metric), args.rr)
    report = rqa(plot)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.series_csv).stem
    (out_dir / f"{stem}_rp.pgm").write_bytes(export_rp(plot))
    (out_dir / f"{stem}_diag_hist.csv").write_text(histogram_csv(report.diag_hist),
                                                   encoding="utf-8")
    (out_dir / f"{stem}_vert_hist.csv").write_text(histogram_csv(report.vert_hist),
                                                   encoding="utf-8")
    print(f"eps={_fmt(plot.threshold)} rr_achieved={_fmt(plot.rr_achieved)} "
          f"DET={_fmt(report.det)} LAM={_fmt(report.lam)} "
          f"DIV={_fmt(report.div)} ENTR={_fmt(report.entr)}")
    return 0


def _add_sweep(subparsers):
    p = subparsers.add_parser("sweep", help="run a field sweep from a config file")
    p.add_argument("--config", default=None, help="key = value config file")
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--t_max", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--h", default=None, help="comma list or start:stop:step")
    p.add_argument("--distances", default=None)
    p.add_argument("--observables", default=None)
    p.add_argument("--window", default=None, help="LO:HI")
    p.add_argument("--rr", type=float, default=None)
    p.add_argument("--rescale", action="store_const", const="true", default=None)
    p.add_argument("--no-rescale", dest="rescale", action="store_const", const="false")
    p.add_argument("--embed_dim", type=int, default=None)
    p.add_argument("--embed_delay", type=int, default=None)
    p.add_argument("--metric", choices=("euclidean", "maximum"), default=None)
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--threads", type=int, default=None, help="worker processes, 0 = auto")
    p.add_argument("--images", action="store_const", const="true", default=None)


def _cmd_sweep(args):
    raw = parse_config_file(args.config) if args.config else {}
    overrides = {
        key: getattr(args, key)
        for key in ("L", "t_max", "dt", "h", "distances", "observables", "window",
                    "rr", "rescale", "embed_dim", "embed_delay", "metric", "out",
                    "threads", "images")
        if getattr(args, key) is not None
    }
    config = build_sweep_config(raw, overrides)
    result = run_sweep(config)
    for tag, path in sorted(result.csv_paths.items()):
        print(f"{tag}: {len(result.rows[tag])} rows -> {path}")
    return 0


def _add_oracle_check(subparsers):
    p = subparsers.add_parser(
        "oracle-check",
        help="compare the engine against dense diagonalization on a reference grid")
    p.add_argument("--L", type=int, default=8)
    p.add_argument("--tolerance", type=float, default=1e-8)


def _cmd_oracle_check(args):
    fields = (0.5, 1.0, 2.0)
    times = (0.0, 0.5, 1.0, 2.0)
    distances = (1, 2, 3)
    failures = 0
    for h in fields:
        spec = tfim.QuenchSpec(L=args.L, h=h, t_max=max(times), dt=0.5)
        modes = tfim.build_modes(spec)
        system = ed.build_hamiltonian(args.L, h)
        for t in times:
            contractions = tfim.contractions_at(spec, modes, t)
            for ell in distances:
                for tag, evaluate in (("xx", tfim.rho_xx),
                                      ("zz_connected", tfim.rho_zz_connected)):
                    engine = evaluate(contractions, ell)
                    reference = ed.evolve_and_measure(system, t, tag, ell)
                    err = abs(engine - reference)
                    status = "ok" if err <= args.tolerance else "FAIL"
                    if status == "FAIL":
                        failures += 1
                    print(f"{status} {tag:>12} h={h:<4} t={t:<4} l={ell} "
                          f"engine={engine:+.12f} ed={reference:+.12f} err={err:.2e}")
    if failures:
        print(f"{failures} comparisons exceeded tolerance {args.tolerance}")
        return 1
    print(f"all comparisons within {args.tolerance}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="quenchrqa",
        description="Quench dynamics of the transverse-field Ising chain with "
                    "recurrence-plot analysis")
    subparsers = parser.add_subparsers(dest="command", required=True)
    _add_simulate(subparsers)
    _add_rp(subparsers)
    _add_sweep(subparsers)
    _add_oracle_check(subparsers)
    args = parser.parse_args(argv)
    handler = {
        "simulate": _cmd_simulate,
        "rp": _cmd_rp,
        "sweep": _cmd_sweep,
        "oracle-check": _cmd_oracle_check,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
