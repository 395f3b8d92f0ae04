"""CSV loaders with strict header validation.

The upstream schemas are versioned; a header mismatch means the file is not
ours (or the schema moved), so loading fails loudly with the offending path.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

PRIOR_HEADER = ["t", "path1", "path2", "path3", "mean_db", "ci_low_db", "ci_high_db"]
PANELS_HEADER = ["panel", "series", "t", "value_db", "ci_low_db", "ci_high_db"]
SWEEP_HEADER = [
    "predictor", "target", "achieved_analytic", "achieved_empirical",
    "slots", "mean_R", "unallocatable_slots",
]


class CsvFormatError(ValueError):
    """Missing file or unexpected header/row shape; message carries the path."""


def _read_rows(path, expected_header):
    path = Path(path)
    if not path.exists():
        raise CsvFormatError(f"{path}: file not found")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file, expected header "
                                 f"{','.join(expected_header)}") from None
        if header != expected_header:
            raise CsvFormatError(
                f"{path}: unexpected header {','.join(header)!r}; "
                f"expected {','.join(expected_header)!r}"
            )
        return list(reader)


def load_prior(path) -> dict:
    """Prior sample paths and the prior confidence band."""
    rows = _read_rows(path, PRIOR_HEADER)
    data = np.array(rows, dtype=float)
    if data.size == 0:
        raise CsvFormatError(f"{path}: no prior rows")
    return {
        "t": data[:, 0],
        "paths": data[:, 1:4].T,
        "mean": data[:, 4],
        "ci_low": data[:, 5],
        "ci_high": data[:, 6],
    }


def load_panels(path) -> dict:
    """Panel series keyed by (panel index, series name)."""
    rows = _read_rows(path, PANELS_HEADER)
    out: dict = {}
    for row in rows:
        if len(row) != 6:
            raise CsvFormatError(f"{path}: malformed row {row!r}")
        panel = int(row[0])
        series = row[1]
        bucket = out.setdefault(panel, {}).setdefault(series, [])
        bucket.append([float(x) for x in row[2:]])
    for panel, series_map in out.items():
        for series, rows_ in series_map.items():
            arr = np.array(rows_, dtype=float)
            series_map[series] = {
                "t": arr[:, 0],
                "value": arr[:, 1],
                "ci_low": arr[:, 2],
                "ci_high": arr[:, 3],
            }
    return out


def load_outage_table(path) -> list[dict]:
    """Sweep rows in file order (predictor grouping preserved)."""
    rows = _read_rows(path, SWEEP_HEADER)
    if not rows:
        raise CsvFormatError(f"{path}: no sweep rows")
    out = []
    for row in rows:
        if len(row) != 7:
            raise CsvFormatError(f"{path}: malformed row {row!r}")
        out.append(
            {
                "predictor": row[0],
                "target": float(row[1]),
                "achieved_analytic": float(row[2]),
                "achieved_empirical": float(row[3]),
                "slots": int(row[4]),
                "mean_R": float(row[5]),
                "unallocatable_slots": int(row[6]),
            }
        )
    return out
