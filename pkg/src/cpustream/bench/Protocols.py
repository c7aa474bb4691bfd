import logging
from typing import Optional
import numpy as np
from ..data.LagDataset import LagDataset
from ..errors import ConfigError
from ..metrics.Accumulator import MetricAccumulator, MetricReport, Footprint, metrics_finalize, naive_mae
from ..metrics.Footprint import Stopwatch, model_memory_bytes
from ..regressor import Regressor
from .Models import build_model
from .RunConfig import RunConfig, RunResult, PreparedData, DEFAULT_REFIT_WINDOW

logger = logging.getLogger(__name__)


def evaluate_holdout(model: Regressor, train: LagDataset, test: LagDataset):
    """Fit on train, score every test instance without updates."""
    train_watch, eval_watch = Stopwatch(), Stopwatch()
    with train_watch:
        model.fit(train)
    acc = MetricAccumulator()
    with eval_watch:
        for x, y in test.rows():
            acc.update(y, model.predict_one(x))
    return acc, train_watch, eval_watch


def evaluate_prequential(
    model: Regressor,
    train: LagDataset,
    test: LagDataset,
    pretrain: bool = False,
    refit_interval: Optional[int] = None,
    refit_window: int = DEFAULT_REFIT_WINDOW,
):
    """
    Test-then-train over the test set.

    Every instance is predicted and scored before the model sees it. With
    refit_interval, the model is refitted from scratch on the last
    refit_window instances every refit_interval instances instead; before
    its first fit it predicts 0.0.
    """
    pretrain_watch, eval_watch = None, Stopwatch()
    fitted = refit_interval is None or pretrain
    if pretrain:
        pretrain_watch = Stopwatch()
        with pretrain_watch:
            model.fit(train)

    if refit_interval is not None:
        features = np.vstack((train.features, test.features))
        targets = np.concatenate((train.targets, test.targets))

    acc = MetricAccumulator()
    with eval_watch:
        for i, (x, y) in enumerate(test.rows()):
            acc.update(y, model.predict_one(x) if fitted else 0.0)
            if refit_interval is None:
                model.learn_one(x, y)
            elif (i + 1) % refit_interval == 0:
                end = len(train) + i + 1
                start = max(0, end - refit_window)
                model.fit(LagDataset(features[start:end], targets[start:end], train.window_size))
                fitted = True
    return acc, pretrain_watch, eval_watch


def _result(cfg: RunConfig, model: Regressor, data: PreparedData, acc: MetricAccumulator,
            first_watch, eval_watch) -> RunResult:
    train, test = data.datasets(cfg.window_size)
    report: MetricReport = metrics_finalize(
        acc, naive_mae(train.persistence_series()), strict=False
    )
    report.footprint = Footprint(
        pretrain_seconds=first_watch.seconds if first_watch is not None else 0.0,
        eval_seconds=eval_watch.seconds,
        model_bytes=model_memory_bytes(model.to_snapshot()),
    )
    return RunResult(
        model=cfg.model,
        window_size=cfg.window_size,
        seed_index=cfg.seed_index,
        seed=cfg.cell_seed,
        protocol=cfg.protocol,
        pretrain=cfg.pretrain,
        standardized=model.get_standardized(),
        n_train=len(train),
        n_test=len(test),
        report=report,
    )


def _resolve(cfg: RunConfig, data: Optional[PreparedData]) -> PreparedData:
    if data is not None:
        return data
    if cfg.data is None:
        raise ConfigError("run config has no data source")
    return cfg.data.load()


def run_holdout(cfg: RunConfig, data: PreparedData = None, model: Regressor = None) -> RunResult:
    data = _resolve(cfg, data)
    train, test = data.datasets(cfg.window_size)
    if model is None:
        model = build_model(cfg.model, cfg.window_size, cfg.cell_seed, cfg.params)
    logger.info(f"holdout {cfg.model} L={cfg.window_size} seed#{cfg.seed_index}")
    acc, train_watch, eval_watch = evaluate_holdout(model, train, test)
    return _result(cfg, model, data, acc, train_watch, eval_watch)


def run_prequential(cfg: RunConfig, data: PreparedData = None, model: Regressor = None) -> RunResult:
    data = _resolve(cfg, data)
    train, test = data.datasets(cfg.window_size)
    if model is None:
        model = build_model(cfg.model, cfg.window_size, cfg.cell_seed, cfg.params)
    logger.info(
        f"prequential {cfg.model} L={cfg.window_size} seed#{cfg.seed_index}"
        f"{' pretrained' if cfg.pretrain else ''}"
    )
    acc, pretrain_watch, eval_watch = evaluate_prequential(
        model, train, test, cfg.pretrain, cfg.refit_interval, cfg.refit_window
    )
    return _result(cfg, model, data, acc, pretrain_watch, eval_watch)


def run_cell(cfg: RunConfig, data: PreparedData = None) -> tuple[RunResult, Regressor]:
    """Run one configured cell and also hand back the trained model."""
    model = build_model(cfg.model, cfg.window_size, cfg.cell_seed, cfg.params)
    runner = run_holdout if cfg.protocol == "holdout" else run_prequential
    return runner(cfg, data, model), model
