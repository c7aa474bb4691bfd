import json
import logging
from dataclasses import asdict
from pathlib import Path
import pandas as pd
from ..errors import ValidationError
from ..metrics.Accumulator import METRIC_NAMES
from .RunConfig import DatasetFingerprint
from .Suite import SummaryReport, CellSummary, CellFailure, Stat, FOOTPRINT_FIELDS, TIMING_FIELDS

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")

CSV_COLUMNS = (
    ["model", "window_size", "seeds", "standardized"]
    + [f"{name}_{part}" for name in METRIC_NAMES for part in ("mean", "std")]
    + [f"{name}_{part}" for name in FOOTPRINT_FIELDS for part in ("mean", "std")]
)

RUN_COLUMNS = (
    ["model", "window_size", "seed_index", "seed", "protocol", "pretrain", "standardized"]
    + list(METRIC_NAMES)
    + list(FOOTPRINT_FIELDS)
)


def _stat(stat):
    return None if stat is None else {"mean": stat.mean, "std": stat.std}


def report_to_dict(report: SummaryReport, include_timings: bool = False) -> dict:
    """
    JSON-ready view of a report.

    Wall-clock timings are left out unless asked for, so repeated runs with
    the same flags serialize to identical bytes.
    """
    cells = []
    for cell in report.cells:
        footprint = {
            name: _stat(stat)
            for name, stat in cell.footprint.items()
            if include_timings or name not in TIMING_FIELDS
        }
        cells.append(
            {
                "model": cell.model,
                "window_size": cell.window_size,
                "seeds": cell.seeds,
                "standardized": cell.standardized,
                "metrics": {name: _stat(stat) for name, stat in cell.metrics.items()},
                "footprint": footprint,
            }
        )
    out = {"dataset": asdict(report.dataset), "cells": cells}
    if report.failures:
        out["failures"] = [asdict(failure) for failure in report.failures]
    return out


def _stat_from(value):
    return None if value is None else Stat(float(value["mean"]), float(value["std"]))


def report_from_dict(data: dict) -> SummaryReport:
    cells = [
        CellSummary(
            model=cell["model"],
            window_size=int(cell["window_size"]),
            seeds=int(cell["seeds"]),
            standardized=bool(cell["standardized"]),
            metrics={name: _stat_from(value) for name, value in cell["metrics"].items()},
            footprint={name: _stat_from(value) for name, value in cell["footprint"].items()},
        )
        for cell in data["cells"]
    ]
    failures = [CellFailure(**failure) for failure in data.get("failures", [])]
    return SummaryReport(DatasetFingerprint(**data["dataset"]), cells, failures)


def report_frame(report: SummaryReport) -> pd.DataFrame:
    rows = []
    for cell in report.cells:
        row = {
            "model": cell.model,
            "window_size": cell.window_size,
            "seeds": cell.seeds,
            "standardized": cell.standardized,
        }
        for group in (cell.metrics, cell.footprint):
            for name, stat in group.items():
                row[f"{name}_mean"] = None if stat is None else stat.mean
                row[f"{name}_std"] = None if stat is None else stat.std
        rows.append(row)
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_report(report: SummaryReport, path, format: str = "json", include_timings: bool = False) -> Path:
    """
    JSON keeps full precision; CSV mirrors the result tables at 3 decimals and always carries timings.

    A report whose every cell failed is still written so the failures can be read back.
    """
    if format not in FORMATS:
        raise ValidationError(f"format must be one of {FORMATS}, got '{format}'")
    if not report.cells and not report.failures:
        raise ValidationError("report has no cells or failures to write")
    path = Path(path)
    if format == "json":
        text = json.dumps(report_to_dict(report, include_timings), indent=2) + "\n"
        path.write_text(text, encoding="utf-8")
    else:
        report_frame(report).to_csv(path, index=False, float_format="%.3f", lineterminator="\n")
    logger.info(f"Wrote {format} report with {len(report.cells)} cells to {path}")
    return path


def read_report(path) -> SummaryReport:
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_runs(report: SummaryReport, path) -> Path:
    """One row per (model, window size, seed) for distribution plots."""
    rows = []
    for run in report.runs:
        row = {
            "model": run.model,
            "window_size": run.window_size,
            "seed_index": run.seed_index,
            "seed": run.seed,
            "protocol": run.protocol,
            "pretrain": run.pretrain,
            "standardized": run.standardized,
        }
        row.update(run.report.metrics())
        row.update({name: getattr(run.report.footprint, name) for name in FOOTPRINT_FIELDS})
        rows.append(row)
    path = Path(path)
    pd.DataFrame(rows, columns=RUN_COLUMNS).to_csv(path, index=False, float_format="%.6f", lineterminator="\n")
    return path
