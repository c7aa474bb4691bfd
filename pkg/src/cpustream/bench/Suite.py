import math
import logging
from dataclasses import dataclass, field
from itertools import groupby
from typing import Optional
from joblib import Parallel, delayed
from ..errors import ValidationError
from ..metrics.Accumulator import METRIC_NAMES
from ..snapshot.Snapshot import SnapshotConfig, SnapshotStore
from .Models import is_batch_model, model_rank
from .Protocols import run_cell
from .RunConfig import RunConfig, RunResult, PreparedData, DatasetFingerprint

logger = logging.getLogger(__name__)

FOOTPRINT_FIELDS = ("pretrain_seconds", "eval_seconds", "model_bytes")
TIMING_FIELDS = ("pretrain_seconds", "eval_seconds")


@dataclass(frozen=True)
class Stat:
    mean: float
    std: float


@dataclass
class CellSummary:
    model: str
    window_size: int
    seeds: int
    standardized: bool
    metrics: dict
    footprint: dict


@dataclass
class CellFailure:
    model: str
    window_size: int
    seed_index: int
    error: str


@dataclass
class SummaryReport:
    dataset: DatasetFingerprint
    cells: list
    failures: list = field(default_factory=list)
    runs: list = field(default_factory=list, compare=False, repr=False)

    def cell(self, model: str, window_size: int) -> CellSummary:
        for cell in self.cells:
            if cell.model == model and cell.window_size == window_size:
                return cell
        raise KeyError(f"no cell for {model} L={window_size}")

    def best_cells(self, metric: str = "mae") -> dict:
        """window size with the lowest mean of `metric`, per model (ties keep the smaller window)"""
        best = {}
        for cell in self.cells:
            stat = cell.metrics.get(metric)
            if stat is None:
                continue
            current = best.get(cell.model)
            if current is None or stat.mean < current[1]:
                best[cell.model] = (cell.window_size, stat.mean)
        return {model: window for model, (window, _) in best.items()}


def aggregate(values: list) -> Optional[Stat]:
    """Mean and population std; identical values give std exactly 0."""
    values = [float(v) for v in values if v is not None]
    if not values:
        return None
    if all(v == values[0] for v in values):
        return Stat(values[0], 0.0)
    mean = math.fsum(values) / len(values)
    return Stat(mean, math.sqrt(math.fsum((v - mean) ** 2 for v in values) / len(values)))


def expand_configs(
    protocol: str,
    models: list,
    window_sizes: list,
    n_seeds: int,
    suite_seed: int = 42,
    pretrain: bool = False,
    refit_interval: Optional[int] = None,
    params_by_model: dict = None,
    data=None,
) -> list[RunConfig]:
    if n_seeds < 1:
        raise ValidationError(f"need at least one seed, got {n_seeds}")
    params_by_model = params_by_model or {}
    return [
        RunConfig(
            protocol=protocol,
            model=model,
            params=dict(params_by_model.get(model, {})),
            window_size=window_size,
            seed_index=seed_index,
            suite_seed=suite_seed,
            pretrain=pretrain,
            refit_interval=refit_interval if refit_interval and _needs_refit(model, protocol) else None,
            data=data,
        )
        for model in models
        for window_size in window_sizes
        for seed_index in range(n_seeds)
    ]


def _needs_refit(model: str, protocol: str) -> bool:
    return protocol == "prequential" and is_batch_model(model)


def _run_one(cfg: RunConfig, data: PreparedData, snapshot_dir: Optional[str]):
    try:
        result, model = run_cell(cfg, data)
        if snapshot_dir is not None:
            SnapshotStore(SnapshotConfig(dir=snapshot_dir)).save(
                f"{cfg.model}-L{cfg.window_size}-s{cfg.seed_index}", model.to_snapshot()
            )
        return result
    except Exception as e:
        logger.error(f"Cell {cfg.model} L={cfg.window_size} seed#{cfg.seed_index} failed: {e}")
        return CellFailure(cfg.model, cfg.window_size, cfg.seed_index, f"{type(e).__name__}: {e}")


def run_suite(
    cfgs: list,
    data: PreparedData = None,
    workers: int = 1,
    backend: str = "loky",
    snapshot_dir: Optional[str] = None,
) -> SummaryReport:
    """
    Run every (model, window size, seed) cell and aggregate over seeds.

    Cells may run in any order on any number of workers; results are sorted
    by (model order, window size, seed index) before aggregation, so the
    report depends only on the configs. Failed cells are recorded and the
    suite carries on.
    """
    if not cfgs:
        raise ValidationError("run_suite needs at least one config")
    if data is None:
        if cfgs[0].data is None:
            raise ValidationError("no data given and the configs carry no data source")
        data = cfgs[0].data.load()

    logger.info(f"Running {len(cfgs)} cells on {workers} worker(s)")
    outcomes = Parallel(n_jobs=workers, backend=backend)(
        delayed(_run_one)(cfg, data, snapshot_dir) for cfg in cfgs
    )

    def order(item):
        return model_rank(item.model), item.window_size, item.seed_index

    results = sorted((o for o in outcomes if isinstance(o, RunResult)), key=order)
    failures = sorted((o for o in outcomes if isinstance(o, CellFailure)), key=order)

    cells = []
    for (model, window_size), group in groupby(results, key=lambda r: (r.model, r.window_size)):
        runs = list(group)
        cells.append(
            CellSummary(
                model=model,
                window_size=window_size,
                seeds=len(runs),
                standardized=runs[0].standardized,
                metrics={
                    name: aggregate([getattr(r.report, name) for r in runs]) for name in METRIC_NAMES
                },
                footprint={
                    name: aggregate([getattr(r.report.footprint, name) for r in runs])
                    for name in FOOTPRINT_FIELDS
                },
            )
        )
    if failures:
        logger.warning(f"{len(failures)} of {len(cfgs)} cells failed")
    return SummaryReport(data.fingerprint, cells, failures, results)
