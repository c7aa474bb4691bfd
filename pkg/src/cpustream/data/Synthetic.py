import math
from dataclasses import dataclass
import numpy as np
from ..errors import ValidationError
from ..seeding import make_rng
from .LagDataset import LagDataset
from .TimeSeries import TimeSeries, MIN_UTIL, MAX_UTIL

IDLE_LEVEL_RANGE = (0.0, 5.0)


@dataclass
class SynthConfig:
    seed: int = 0
    total_minutes: int = 1440
    workload_minutes: int = 60
    pause_seconds: int = 60
    noise_std: float = 2.0

    def __post_init__(self):
        if self.total_minutes < 1:
            raise ValidationError("total_minutes must be positive")
        if self.workload_minutes < 1:
            raise ValidationError("workload_minutes must be positive")
        if self.total_minutes < self.workload_minutes:
            raise ValidationError("total_minutes must be >= workload_minutes")
        if self.pause_seconds < 0:
            raise ValidationError("pause_seconds must be >= 0")
        if self.noise_std < 0:
            raise ValidationError("noise_std must be >= 0")


default_synth_config = SynthConfig()


@dataclass(frozen=True)
class WorkloadBlock:
    start_minute: int
    minutes: int
    level: float
    is_pause: bool


def workload_blocks(cfg: SynthConfig) -> list[WorkloadBlock]:
    """Block schedule: workload, pause, workload, pause ... truncated at total_minutes."""
    rng = make_rng(cfg.seed)
    pause_minutes = math.ceil(cfg.pause_seconds / 60)
    blocks = []
    minute = 0
    while minute < cfg.total_minutes:
        length = min(cfg.workload_minutes, cfg.total_minutes - minute)
        blocks.append(WorkloadBlock(minute, length, float(rng.uniform(MIN_UTIL, MAX_UTIL)), False))
        minute += length
        if pause_minutes and minute < cfg.total_minutes:
            length = min(pause_minutes, cfg.total_minutes - minute)
            blocks.append(WorkloadBlock(minute, length, float(rng.uniform(*IDLE_LEVEL_RANGE)), True))
            minute += length
    return blocks


def generate_synthetic_workload(cfg: SynthConfig = default_synth_config, start_timestamp: int = 0) -> TimeSeries:
    """
    Stress-style utilization trace on a 1-minute grid.

    Workload blocks sit at a uniform random level with Gaussian noise, pauses
    sit at a noiseless idle level. Noise is drawn after the whole schedule, so
    the schedule does not depend on noise_std.
    """
    blocks = workload_blocks(cfg)
    noise_rng = make_rng(cfg.seed + 1)
    values = np.empty(cfg.total_minutes)
    for block in blocks:
        span = slice(block.start_minute, block.start_minute + block.minutes)
        values[span] = block.level
        if not block.is_pause and cfg.noise_std > 0:
            values[span] += noise_rng.normal(0.0, cfg.noise_std, block.minutes)
    np.clip(values, MIN_UTIL, MAX_UTIL, out=values)
    timestamps = start_timestamp + 60.0 * np.arange(cfg.total_minutes)
    return TimeSeries(timestamps, values)


def step_function_dataset(n: int, seed: int, n_features: int = 2, threshold: float = 0.5,
                          low: float = 2.0, high: float = 10.0) -> LagDataset:
    """y = high if x0 > threshold else low, features uniform in [0, 1)"""
    rng = make_rng(seed)
    X = rng.random((n, n_features))
    y = np.where(X[:, 0] > threshold, high, low)
    return LagDataset(X, y, n_features)


def concept_flip_dataset(n: int, seed: int, n_features: int = 2, flip_at: int = None,
                         noise_std: float = 0.1) -> LagDataset:
    """y = 10 * x0 before the flip and 10 - 10 * x0 after, plus Gaussian noise"""
    rng = make_rng(seed)
    flip_at = n // 2 if flip_at is None else flip_at
    X = rng.random((n, n_features))
    y = 10.0 * X[:, 0]
    y[flip_at:] = 10.0 - y[flip_at:]
    y += rng.normal(0.0, noise_std, n)
    return LagDataset(X, y, n_features)


def linear_dataset(n: int, seed: int, slope: float, intercept: float = 0.0,
                   n_features: int = 1, scale: float = 100.0) -> LagDataset:
    """noiseless y = slope * x0 + intercept with x uniform in [0, scale)"""
    rng = make_rng(seed)
    X = scale * rng.random((n, n_features))
    y = slope * X[:, 0] + intercept
    return LagDataset(X, y, n_features)
