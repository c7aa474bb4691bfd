import random
import pytest
import numpy as np
from abc import ABC, abstractmethod
from src.cpustream.bench.Models import PersistenceModel
from src.cpustream.bench.Protocols import (
    evaluate_holdout,
    evaluate_prequential,
    run_holdout,
    run_prequential,
)
from src.cpustream.bench.Report import report_to_dict
from src.cpustream.bench.RunConfig import PreparedData, RunConfig
from src.cpustream.bench.Suite import expand_configs, run_suite
from src.cpustream.errors import ConfigError
from src.cpustream.metrics import METRIC_NAMES, metrics_finalize, naive_mae
from src.cpustream.regressor import Regressor


class MemorizeLast(Regressor):
    """Predicts the last target it learned."""

    name = "memorize"

    def __init__(self, n_features: int):
        super().__init__(n_features)
        self.last = 0.0

    def predict_one(self, x) -> float:
        return self.last

    def learn_one(self, x, y: float, w: float = 1.0) -> None:
        self.last = y

    def to_snapshot(self) -> dict:
        return {"kind": self.name, "last": self.last}


class BaseProtocolTests(ABC):
    window_size = 6

    def setup_method(self):
        """Setup method called before each test."""
        self.data: PreparedData = self.create_data()

    @abstractmethod
    def create_data(self) -> PreparedData:
        raise NotImplementedError

    def config(self, **kwargs) -> RunConfig:
        kwargs.setdefault("window_size", self.window_size)
        return RunConfig(**kwargs)

    # MASE

    def test_persistence_on_train_has_unit_mase(self):
        """Test persistence scored on its own training targets gives MASE 1"""
        train, _ = self.data.datasets(self.window_size)
        acc, _, _ = evaluate_holdout(PersistenceModel(self.window_size), train, train)
        report = metrics_finalize(acc, naive_mae(train.persistence_series()))
        assert report.mase == pytest.approx(1.0, abs=1e-12)

    def test_mase_is_mae_over_naive(self):
        """Test MASE is exactly MAE over the in-sample naive MAE"""
        report = run_holdout(self.config(protocol="holdout", model="ht"), self.data).report
        assert report.mase == report.mae / report.naive_mae_in_sample

    # protocols

    def test_holdout_online_model(self):
        """Test an online model trains one pass and scores every test point"""
        result = run_holdout(self.config(protocol="holdout", model="ht"), self.data)
        train, test = self.data.datasets(self.window_size)
        assert (result.n_train, result.n_test) == (len(train), len(test))
        assert result.report.n == len(test)
        assert all(np.isfinite(v) for v in result.report.metrics().values() if v is not None)

    @pytest.mark.parametrize("model", ["frozen-ht", "frozen-sgd"])
    def test_frozen_prequential_equals_holdout(self, model):
        """Test a model that never updates scores the same under both protocols"""
        holdout = run_holdout(self.config(protocol="holdout", model=model), self.data)
        prequential = run_prequential(self.config(protocol="prequential", model=model, pretrain=True), self.data)
        assert holdout.report.metrics() == prequential.report.metrics()

    def test_test_then_train(self):
        """Test every prediction is made before the target is learned"""
        train, test = self.data.datasets(self.window_size)
        acc, _, _ = evaluate_prequential(MemorizeLast(self.window_size), train, test)
        previous = np.concatenate(([0.0], test.targets[:-1]))
        assert acc.sum_abs_err == pytest.approx(np.abs(test.targets - previous).sum())
        assert acc.sum_abs_err > 0

    def test_batch_model_needs_refit(self):
        """Test a batch model is refused in plain prequential mode"""
        with pytest.raises(ConfigError):
            run_prequential(self.config(protocol="prequential", model="ols"), self.data)

    def test_suite_rejects_batch_model_without_refit(self):
        """Test expanding a prequential suite with a batch model and no refit interval fails up front"""
        with pytest.raises(ConfigError, match="refit interval"):
            expand_configs("prequential", ["ht", "rf"], [self.window_size], 2)
        assert len(expand_configs("prequential", ["ht", "rf"], [self.window_size], 2, refit_interval=50)) == 4

    def test_frozen_model_needs_pretrain(self):
        """Test a frozen model is refused without pretraining"""
        with pytest.raises(ConfigError):
            run_prequential(self.config(protocol="prequential", model="frozen-ht"), self.data)

    def test_batch_in_the_loop(self):
        """Test a pretrained OLS refitted every 25 instances scores finitely"""
        cfg = self.config(protocol="prequential", model="ols", pretrain=True, refit_interval=25, refit_window=200)
        report = run_prequential(cfg, self.data).report
        assert np.isfinite(report.mae) and report.footprint.pretrain_seconds >= 0.001

    def test_timings_at_millisecond_resolution(self):
        """Test timings are positive whole milliseconds"""
        footprint = run_prequential(self.config(model="pa", pretrain=True), self.data).report.footprint
        for seconds in (footprint.pretrain_seconds, footprint.eval_seconds):
            assert seconds >= 0.001
            assert seconds * 1000 == pytest.approx(round(seconds * 1000))
        assert footprint.model_bytes > 0

    def test_no_pretrain_reports_zero_pretrain_time(self):
        """Test a run without pretraining reports zero pretraining seconds"""
        assert run_prequential(self.config(model="sgd"), self.data).report.footprint.pretrain_seconds == 0.0

    # reproducibility

    def test_reproducible(self):
        """Test identical configs give identical results"""
        cfg = self.config(model="arf", params={"n_models": 3}, seed_index=2)
        a, b = run_prequential(cfg, self.data), run_prequential(cfg, self.data)
        assert a.report.metrics() == b.report.metrics()
        assert a.report.footprint.model_bytes == b.report.footprint.model_bytes
        assert a.seed == b.seed

    def test_deterministic_model_has_zero_std(self):
        """Test HT reports std exactly 0 across seeds"""
        report = run_suite(expand_configs("prequential", ["ht"], [self.window_size], 3), self.data)
        cell = report.cell("ht", self.window_size)
        assert cell.seeds == 3
        for name in METRIC_NAMES:
            if cell.metrics[name] is not None:
                assert cell.metrics[name].std == 0.0
        assert cell.footprint["model_bytes"].std == 0.0

    def test_single_seed_has_zero_std(self):
        """Test one seed gives std 0 by definition"""
        report = run_suite(expand_configs("prequential", ["srp"], [self.window_size], 1, params_by_model={"srp": {"n_models": 3}}), self.data)
        assert all(stat.std == 0.0 for stat in report.cells[0].metrics.values() if stat is not None)

    def test_shuffled_cells_identical_report(self):
        """Test cell execution order does not change the report"""
        cfgs = expand_configs("prequential", ["sgd", "ht"], [self.window_size, 9], 2)
        shuffled = list(cfgs)
        random.Random(0).shuffle(shuffled)
        assert report_to_dict(run_suite(cfgs, self.data)) == report_to_dict(run_suite(shuffled, self.data))
        assert [c.model for c in run_suite(shuffled, self.data).cells] == ["ht", "ht", "sgd", "sgd"]

    def test_failed_cells_recorded(self):
        """Test a failing cell is recorded while the others still run"""
        cfgs = expand_configs("prequential", ["pa"], [self.window_size, 100_000], 2)
        report = run_suite(cfgs, self.data)
        assert [(c.model, c.window_size) for c in report.cells] == [("pa", self.window_size)]
        assert [(f.window_size, f.seed_index) for f in report.failures] == [(100_000, 0), (100_000, 1)]
        assert "ValidationError" in report.failures[0].error
