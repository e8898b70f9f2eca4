"""Parameter sweeps over the post-quench field with RQA and spectral probes.

For every (field, distance) cell the pipeline simulates the correlator,
optionally rescales the time axis by min(h, 1) with a previous-sample hold,
selects the analysis window, thresholds the recurrence plot at the target
recurrence rate, and writes one CSV row of quantifiers.  Cells are
independent work items; runs are byte-deterministic regardless of the number
of worker processes because rows are merged in sorted order and floats are
serialized with round-trip precision.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .recurrence import (
    EmbeddingConfig,
    TimeSeries,
    distance_matrix,
    embed,
    export_rp,
    rqa,
    threshold_by_rate,
)
from .spectral import ipr, mean_abs
from .tfim import OBSERVABLES, QuenchSpec, simulate_series

__all__ = [
    "SweepConfig",
    "SweepResult",
    "select_window",
    "rescale_time",
    "run_sweep",
    "default_field_grid",
    "parse_config_file",
    "build_sweep_config",
    "CSV_HEADER",
]

CSV_HEADER = "h,l,DET,LAM,DIV,ENTR,RR_achieved,MEAN_ABS,IPR"

#: config keys, their parsers, and defaults; CLI flags carry the same names
_GRID_EPS = 1e-9


def default_field_grid():
    """Post-quench fields 0.1 to 3.0 in steps of 0.05."""
    return tuple(0.05 * i for i in range(2, 61))


def _parse_floats(text):
    return tuple(float(part) for part in str(text).split(",") if str(part).strip())


def _parse_field_values(text):
    """Comma list ("0.5,1,2") or inclusive range ("0.1:3.0:0.05")."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"field range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError(f"field range step must be > 0, got {step}")
        count = int(math.floor((stop - start) / step + _GRID_EPS))
        return tuple(start + i * step for i in range(count + 1))
    return _parse_floats(text)


def _parse_ints(text):
    return tuple(int(part) for part in str(text).split(",") if str(part).strip())


def _parse_bool(text):
    text = str(text).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_window(text):
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ValueError(f"window must be LO:HI, got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_observables(text):
    return tuple(part.strip() for part in str(text).split(",") if part.strip())


@dataclass(frozen=True)
class SweepConfig:
    """Declarative description of one sweep run."""

    L: int = 128
    t_max: float = 500.0
    dt: float = 0.1
    h: tuple = ()
    distances: tuple = (1, 2, 3, 6, 10, 20)
    observables: tuple = ("xx",)
    window: tuple = (300.0, 500.0)
    rr: float = 0.10
    rescale: bool = False
    embed_dim: int = 1
    embed_delay: int = 1
    metric: str = "euclidean"
    out: str = "sweep_out"
    threads: int = 0
    images: bool = False

    def __post_init__(self):
        if not self.h:
            object.__setattr__(self, "h", default_field_grid())
        if any(value <= 0 for value in self.h):
            raise ValueError("all field values must be > 0")
        t_lo, t_hi = self.window
        if not t_lo < t_hi <= self.t_max + _GRID_EPS:
            raise ValueError(f"window must satisfy t_lo < t_hi <= t_max, got {self.window}")
        if (t_hi - t_lo) / self.dt < 2:
            raise ValueError("window must contain at least 2 samples")
        if not 0 < self.rr < 1:
            raise ValueError(f"rr must be in (0, 1), got {self.rr}")
        for tag in self.observables:
            if tag not in OBSERVABLES:
                raise ValueError(f"unknown observable {tag!r}")
        if not self.distances:
            raise ValueError("need at least one distance")
        for ell in self.distances:
            if not 1 <= ell <= self.L // 2:
                raise ValueError(f"distance {ell} outside [1, L/2] for L={self.L}")
        if self.threads < 0:
            raise ValueError(f"threads must be >= 0, got {self.threads}")

    @property
    def embedding(self):
        return EmbeddingConfig(dim=self.embed_dim, delay=self.embed_delay,
                               metric=self.metric)


_CONFIG_PARSERS = {
    "L": int,
    "t_max": float,
    "dt": float,
    "h": _parse_field_values,
    "distances": _parse_ints,
    "observables": _parse_observables,
    "window": _parse_window,
    "rr": float,
    "rescale": _parse_bool,
    "embed_dim": int,
    "embed_delay": int,
    "metric": str,
    "out": str,
    "threads": int,
    "images": _parse_bool,
}


def parse_config_file(path):
    """Flat key = value text file; blank lines and # comments ignored."""
    raw = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _CONFIG_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        raw[key] = value
    return raw


def build_sweep_config(raw=None, overrides=None):
    """Assemble a SweepConfig from raw config text values plus CLI overrides."""
    fields = {}
    for source in (raw or {}), (overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"unknown config key {key!r}")
            fields[key] = _CONFIG_PARSERS[key](value)
    return SweepConfig(**fields)


def select_window(series, t_lo, t_hi):
    """Samples with t_lo <= t_n < t_hi (half-open window).

    Sample membership is resolved through grid indices with a small guard so
    that window edges landing exactly on grid points are kept.
    """
    if not t_lo < t_hi:
        raise ValueError(f"empty window [{t_lo}, {t_hi})")
    n_lo = math.ceil((t_lo - series.t0) / series.dt - _GRID_EPS)
    n_hi = math.ceil((t_hi - series.t0) / series.dt - _GRID_EPS)
    if n_lo < 0 or n_hi > series.n_samples:
        raise ValueError(
            f"window [{t_lo}, {t_hi}) extends past the series span "
            f"[{series.t0}, {series.t0 + series.n_samples * series.dt})")
    if n_hi <= n_lo:
        raise ValueError(f"window [{t_lo}, {t_hi}) contains no samples")
    return TimeSeries(values=series.values[n_lo:n_hi], dt=series.dt,
                      t0=series.t0 + n_lo * series.dt)


def rescale_time(series, h):
    """Compress the time axis by min(h, 1) and re-grid with a sample hold.

    Sample n of the output takes the value of the latest input sample whose
    compressed time does not exceed n*dt (zeroth-order interpolation).  For
    h >= 1 this is the identity.  The input must start at t = 0; the output
    is shorter by the compression factor, so windows past the new end raise
    in the subsequent selection step.
    """
    if h <= 0:
        raise ValueError(f"field must be > 0, got {h}")
    factor = min(h, 1.0)
    if factor >= 1.0:
        return series
    if series.t0 != 0.0:
        raise ValueError("time rescaling expects a series starting at t = 0")
    n_out = int(math.floor((series.n_samples - 1) * factor + _GRID_EPS)) + 1
    source = np.floor(np.arange(n_out) / factor + _GRID_EPS).astype(int)
    source = np.minimum(source, series.n_samples - 1)
    return TimeSeries(values=series.values[source], dt=series.dt, t0=0.0)


def _format_float(value):
    return repr(float(value))


@dataclass(frozen=True)
class SweepResult:
    """Rows per observable plus the files written."""

    rows: dict  # tag -> list of row dicts, sorted by (distance, field)
    csv_paths: dict  # tag -> Path
    image_paths: list


def _analyze_cell(config, h, ell, scalar):
    if config.rescale:
        scalar = rescale_time(scalar, h)
    window = select_window(scalar, *config.window)
    trajectory = embed(window, config.embedding)
    distances = distance_matrix(trajectory, config.metric)
    _, plot = threshold_by_rate(distances, config.rr)
    report = rqa(plot)
    row = {
        "h": h,
        "l": ell,
        "DET": report.det,
        "LAM": report.lam,
        "DIV": report.div,
        "ENTR": report.entr,
        "RR_achieved": report.rr_achieved,
        "MEAN_ABS": mean_abs(window),
        "IPR": ipr(window).ipr,
    }
    return row, plot


def _field_worker(args):
    """All rows (and optional plot images) for one post-quench field."""
    config, h = args
    spec = QuenchSpec(L=config.L, h=h, t_max=config.t_max, dt=config.dt)
    rows = {tag: [] for tag in config.observables}
    images = []
    for tag in config.observables:
        series = simulate_series(spec, tag, config.distances)
        for ell in config.distances:
            scalar = TimeSeries(values=series.column(ell), dt=config.dt, t0=0.0)
            try:
                row, plot = _analyze_cell(config, h, ell, scalar)
            except Exception as exc:
                raise RuntimeError(
                    f"sweep cell failed for h={h}, l={ell}, observable={tag}: {exc}"
                ) from exc
            rows[tag].append(row)
            if config.images:
                images.append((f"rp_{tag}_l{ell}_h{h:.4f}.pgm", export_rp(plot)))
    return h, rows, images


def run_sweep(config):
    """Execute the sweep and write per-observable CSV tables (and images).

    Rows are ordered by (distance, field); identical configs produce
    byte-identical outputs independent of the worker count.
    """
    fields = sorted(config.h)
    jobs = [(config, h) for h in fields]
    workers = config.threads or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_field_worker, jobs))
    else:
        outcomes = [_field_worker(job) for job in jobs]
    outcomes.sort(key=lambda item: item[0])

    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    all_rows = {tag: [] for tag in config.observables}
    image_paths = []
    for _, rows, images in outcomes:
        for tag in config.observables:
            all_rows[tag].extend(rows[tag])
        for name, payload in images:
            path = out_dir / name
            path.write_bytes(payload)
            image_paths.append(path)

    csv_paths = {}
    for tag in config.observables:
        rows = sorted(all_rows[tag], key=lambda row: (row["l"], row["h"]))
        all_rows[tag] = rows
        lines = [CSV_HEADER]
        for row in rows:
            lines.append(",".join([
                _format_float(row["h"]),
                str(row["l"]),
                _format_float(row["DET"]),
                _format_float(row["LAM"]),
                _format_float(row["DIV"]),
                _format_float(row["ENTR"]),
                _format_float(row["RR_achieved"]),
                _format_float(row["MEAN_ABS"]),
                _format_float(row["IPR"]),
            ]))
        path = out_dir / f"sweep_{tag}.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        csv_paths[tag] = path

    _write_config_echo(config, out_dir / "config_used.txt")
    return SweepResult(rows=all_rows, csv_paths=csv_paths, image_paths=image_paths)


def _write_config_echo(config, path):
    """Echo the resolved configuration as a diff-able experiment record."""
    lines = [
        f"L = {config.L}",
        f"t_max = {_format_float(config.t_max)}",
        f"dt = {_format_float(config.dt)}",
        "h = " + ",".join(_format_float(v) for v in config.h),
        "distances = " + ",".join(str(d) for d in config.distances),
        "observables = " + ",".join(config.observables),
        f"window = {_format_float(config.window[0])}:{_format_float(config.window[1])}",
        f"rr = {_format_float(config.rr)}",
        f"rescale = {str(config.rescale).lower()}",
        f"embed_dim = {config.embed_dim}",
        f"embed_delay = {config.embed_delay}",
        f"metric = {config.metric}",
        f"images = {str(config.images).lower()}",
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
