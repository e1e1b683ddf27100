"""File formats: long-series ingestion and CSV round trips for samples and surfaces.

A "long" file is a univariate series, one value per row, that gets sliced
row-major into curves of a fixed period. Samples and covariance surfaces
are stored as CSV with the grid points in the header row; all floats are
written with 17 significant digits so a write/read cycle is exact.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass

import numpy as np

from ftsboot.core import CovSurface, FunctionalSample, Grid

__all__ = [
    "IngestSpec",
    "default_grid_for_period",
    "ingest_series",
    "read_long_series",
    "read_sample",
    "read_surface",
    "write_metadata",
    "write_sample",
    "write_surface",
]

logger = logging.getLogger("ftsboot.io")

MISSING_POLICIES = ("error", "drop_whole_curve")
_NA_TOKENS = frozenset({"", "na", "nan", "null", "none"})


@dataclass(frozen=True)
class IngestSpec:
    """How to slice a long series into curves and what to do with gaps."""

    period: int
    missing_policy: str = "error"

    def __post_init__(self):
        if self.period < 2:
            raise ValueError("period must be >= 2")
        if self.missing_policy not in MISSING_POLICIES:
            raise ValueError(
                f"missing_policy must be one of {MISSING_POLICIES}"
            )


def default_grid_for_period(period: int) -> Grid:
    """Observation grid for sliced curves.

    Period 48 is treated as half-hourly readings over a day, stamped at
    the end of each half hour: 0.5, 1.0, ..., 24.0. Any other period p
    uses 1, 2, ..., p.
    """
    step = 0.5 if period == 48 else 1.0
    return Grid(np.arange(1, period + 1) * step)


def read_long_series(path, column: str | None = None) -> np.ndarray:
    """Read a one-value-per-row series from a CSV file.

    With a column name the first row must be a header naming it. Without
    one, the first column is used and a leading non-numeric row is
    skipped as a header. Empty and NA-like cells become NaN; anything
    else non-numeric is an error naming the file row.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise ValueError("file contains no data")
    start = 0
    if column is not None:
        header = [c.strip() for c in rows[0]]
        if column not in header:
            raise ValueError(
                f"column '{column}' not found (available: {', '.join(header)})"
            )
        idx = header.index(column)
        start = 1
    else:
        idx = 0
        if _parse_cell(rows[0][0]) is None:
            start = 1
    values = np.empty(len(rows) - start)
    for i, row in enumerate(rows[start:], start=start):
        if idx >= len(row):
            raise ValueError(f"row {i + 1}: missing column {idx + 1}")
        parsed = _parse_cell(row[idx])
        if parsed is None:
            raise ValueError(
                f"row {i + 1}: could not parse '{row[idx].strip()}' as a number"
            )
        values[i - start] = parsed
    return values


def _parse_cell(token: str):
    token = token.strip()
    if token.lower() in _NA_TOKENS:
        return float("nan")
    try:
        return float(token)
    except ValueError:
        return None


def ingest_series(values: np.ndarray, spec: IngestSpec):
    """Slice a long series into a functional sample.

    Returns the sample and the tuple of dropped curve indices. The series
    length must be an exact multiple of the period; slicing is row-major,
    so the first ``period`` values form the first curve.
    """
    values = np.asarray(values, dtype=float).ravel()
    n_total = values.size
    period = spec.period
    remainder = n_total % period
    if remainder:
        raise ValueError(
            f"length {n_total} not divisible by period {period} "
            f"(remainder {remainder})"
        )
    curves = values.reshape(-1, period)
    missing = np.isnan(curves)
    dropped: tuple = ()
    if missing.any():
        if spec.missing_policy == "error":
            flat = int(np.flatnonzero(np.isnan(values))[0])
            raise ValueError(f"missing value at position {flat + 1}")
        bad = np.flatnonzero(missing.any(axis=1))
        for curve_idx in bad:
            logger.warning(
                "dropping curve %d: %d missing value(s)",
                int(curve_idx),
                int(missing[curve_idx].sum()),
            )
        curves = curves[~missing.any(axis=1)]
        dropped = tuple(int(i) for i in bad)
        if curves.shape[0] == 0:
            raise ValueError("no curves left after dropping incomplete ones")
    sample = FunctionalSample(curves, default_grid_for_period(period))
    return sample, dropped


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_rows(path, grid: Grid, rows: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_fmt(t) for t in grid.points)
        for row in rows:
            writer.writerow(_fmt(v) for v in row)


def _read_rows(path):
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if len(rows) < 2:
        raise ValueError("file needs a grid header and at least one data row")
    grid = Grid(np.array([float(c) for c in rows[0]]))
    values = np.array([[float(c) for c in row] for row in rows[1:]])
    return grid, values


def write_sample(path, sample: FunctionalSample) -> None:
    _write_rows(path, sample.grid, sample.values)


def read_sample(path) -> FunctionalSample:
    grid, values = _read_rows(path)
    return FunctionalSample(values, grid)


def write_surface(path, surface: CovSurface) -> None:
    _write_rows(path, surface.grid, surface.values)


def read_surface(path) -> CovSurface:
    grid, values = _read_rows(path)
    return CovSurface(values, grid)


def write_metadata(path, payload: dict) -> None:
    """JSON sidecar with deterministic bytes for reproducible reruns."""
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
