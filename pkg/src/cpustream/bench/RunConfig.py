import hashlib
import logging
from dataclasses import dataclass, field, asdict
from typing import Optional
from ..data.LagDataset import LagDataset, make_holdout_datasets, split_series
from ..data.Synthetic import SynthConfig, generate_synthetic_workload
from ..data.TimeSeries import TimeSeries, load_csv, resample_1min, write_csv
from ..errors import ConfigError
from ..metrics.Accumulator import MetricReport
from ..seeding import mix_seed
from .Models import is_batch_model, is_frozen_model, validate_model_name

logger = logging.getLogger(__name__)

PROTOCOLS = ("holdout", "prequential")
DEFAULT_WINDOW_SIZES = (6, 9, 12, 20, 32, 64)
DEFAULT_REFIT_WINDOW = 5000


@dataclass
class DataSource:
    """Either a train/test CSV pair, one CSV split chronologically, or a synthetic trace."""

    train_path: Optional[str] = None
    test_path: Optional[str] = None
    data_path: Optional[str] = None
    synth: Optional[SynthConfig] = None
    train_fraction: float = 0.8
    resample: bool = True

    def __post_init__(self):
        pair = self.train_path is not None or self.test_path is not None
        if pair and (self.train_path is None or self.test_path is None):
            raise ConfigError("--train and --test must be given together")
        sources = sum((pair, self.data_path is not None, self.synth is not None))
        if sources != 1:
            raise ConfigError("give exactly one of a train/test pair, a single data file or a synthetic config")

    def load(self) -> "PreparedData":
        if self.synth is not None:
            train, test = split_series(generate_synthetic_workload(self.synth), self.train_fraction)
        elif self.data_path is not None:
            series = self._prepare(load_csv(self.data_path))
            train, test = split_series(series, self.train_fraction)
        else:
            train = self._prepare(load_csv(self.train_path))
            test = self._prepare(load_csv(self.test_path))
        logger.info(f"Loaded {len(train)} train and {len(test)} test points")
        return PreparedData(train, test)

    def _prepare(self, series: TimeSeries) -> TimeSeries:
        return resample_1min(series) if self.resample else series


@dataclass(frozen=True)
class DatasetFingerprint:
    train_rows: int
    test_rows: int
    sha256: str


class PreparedData:
    """Loaded series plus lag datasets built once per window size."""

    def __init__(self, train_series: TimeSeries, test_series: TimeSeries):
        self.train_series = train_series
        self.test_series = test_series
        digest = hashlib.sha256()
        digest.update(write_csv(train_series).encode("utf-8"))
        digest.update(write_csv(test_series).encode("utf-8"))
        self.fingerprint = DatasetFingerprint(len(train_series), len(test_series), digest.hexdigest())
        self._datasets: dict[int, tuple[LagDataset, LagDataset]] = {}

    def datasets(self, window_size: int) -> tuple[LagDataset, LagDataset]:
        if window_size not in self._datasets:
            self._datasets[window_size] = make_holdout_datasets(
                self.train_series, self.test_series, window_size
            )
        return self._datasets[window_size]


@dataclass
class RunConfig:
    protocol: str = "prequential"
    model: str = "ht"
    params: dict = field(default_factory=dict)
    window_size: int = 6
    seed_index: int = 0
    suite_seed: int = 42
    pretrain: bool = False
    refit_interval: Optional[int] = None
    refit_window: int = DEFAULT_REFIT_WINDOW
    data: Optional[DataSource] = None

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol must be one of {PROTOCOLS}, got '{self.protocol}'")
        validate_model_name(self.model)
        if self.window_size < 1:
            raise ConfigError(f"window size must be >= 1, got {self.window_size}")
        if self.seed_index < 0:
            raise ConfigError(f"seed index must be >= 0, got {self.seed_index}")
        if self.refit_interval is not None:
            if self.refit_interval < 1:
                raise ConfigError(f"refit interval must be >= 1, got {self.refit_interval}")
            if not is_batch_model(self.model):
                raise ConfigError(f"refit interval only applies to batch models, not '{self.model}'")
        if self.protocol == "prequential":
            if is_batch_model(self.model) and self.refit_interval is None:
                raise ConfigError(f"batch model '{self.model}' needs a refit interval in the prequential protocol")
            if is_frozen_model(self.model) and not self.pretrain:
                raise ConfigError(f"frozen model '{self.model}' needs pretraining")
        if self.refit_window < 1:
            raise ConfigError(f"refit window must be >= 1, got {self.refit_window}")

    @property
    def cell_seed(self) -> int:
        return mix_seed(self.suite_seed, self.model, self.window_size, self.seed_index)

    def echo(self) -> dict:
        echo = asdict(self)
        echo.pop("data")
        echo["cell_seed"] = self.cell_seed
        return echo


@dataclass
class RunResult:
    model: str
    window_size: int
    seed_index: int
    seed: int
    protocol: str
    pretrain: bool
    standardized: bool
    n_train: int
    n_test: int
    report: MetricReport
