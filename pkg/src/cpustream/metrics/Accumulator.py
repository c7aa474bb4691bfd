import math
import logging
from dataclasses import dataclass, field, fields, asdict
from typing import Optional, Sequence
import numpy as np
from ..errors import MaseUndefinedError, ValidationError

logger = logging.getLogger(__name__)

METRIC_NAMES = ("mae", "mse", "rmse", "mape", "smape", "mase", "r2")


@dataclass
class MetricAccumulator:
    """Additive sums behind the seven error metrics."""

    n: int = 0
    sum_abs_err: float = 0.0
    sum_sq_err: float = 0.0
    sum_ape: float = 0.0
    sum_sape: float = 0.0
    sum_y: float = 0.0
    sum_y_sq: float = 0.0
    mape_skipped: int = 0

    def update(self, y: float, yhat: float) -> None:
        if not (math.isfinite(y) and math.isfinite(yhat)):
            raise ValidationError(f"metric inputs must be finite, got y={y}, yhat={yhat}")
        error = abs(y - yhat)
        self.n += 1
        self.sum_abs_err += error
        self.sum_sq_err += error * error
        if y == 0:
            self.mape_skipped += 1
        else:
            self.sum_ape += error / abs(y)
        denominator = abs(y) + abs(yhat)
        if denominator > 0:
            self.sum_sape += 2.0 * error / denominator
        self.sum_y += y
        self.sum_y_sq += y * y

    def merge(self, other: "MetricAccumulator") -> "MetricAccumulator":
        return MetricAccumulator(
            **{f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)}
        )

    def __add__(self, other: "MetricAccumulator") -> "MetricAccumulator":
        return self.merge(other)


@dataclass
class Footprint:
    pretrain_seconds: float = 0.0
    eval_seconds: float = 0.0
    model_bytes: int = 0


@dataclass
class MetricReport:
    """Finalized metrics; None marks a metric that is undefined for this run."""

    mae: float
    mse: float
    rmse: float
    mape: Optional[float]
    smape: float
    mase: Optional[float]
    r2: Optional[float]
    naive_mae_in_sample: float
    n: int
    mape_skipped: int = 0
    footprint: Footprint = field(default_factory=Footprint)

    def metrics(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def to_dict(self) -> dict:
        return asdict(self)


def metrics_update(acc: MetricAccumulator, y: float, yhat: float) -> None:
    acc.update(y, yhat)


def metrics_finalize(
    acc: MetricAccumulator, naive_mae_in_sample: float, strict: bool = True
) -> MetricReport:
    """
    Turn accumulated sums into a report.

    Strict mode raises on a zero naive MAE; otherwise MASE is reported as
    None. MAPE is None when every target was zero and R2 is None when the
    targets are constant.
    """
    if acc.n < 2:
        raise ValidationError(f"need at least 2 scored points, got {acc.n}")
    n = acc.n
    mae = acc.sum_abs_err / n
    mse = acc.sum_sq_err / n

    if naive_mae_in_sample > 0:
        mase = mae / naive_mae_in_sample
    elif strict:
        raise MaseUndefinedError("in-sample naive MAE is zero, MASE is undefined")
    else:
        logger.warning("In-sample naive MAE is zero; MASE reported as undefined")
        mase = None

    scored = n - acc.mape_skipped
    mape = 100.0 * acc.sum_ape / scored if scored else None

    ss_tot = acc.sum_y_sq - acc.sum_y * acc.sum_y / n
    r2 = 1.0 - acc.sum_sq_err / ss_tot if ss_tot > 0 else None

    return MetricReport(
        mae=mae,
        mse=mse,
        rmse=math.sqrt(mse),
        mape=mape,
        smape=100.0 * acc.sum_sape / n,
        mase=mase,
        r2=r2,
        naive_mae_in_sample=naive_mae_in_sample,
        n=n,
        mape_skipped=acc.mape_skipped,
    )


def naive_mae(values: Sequence[float]) -> float:
    """MAE of the lag-1 persistence forecast over an ordered series."""
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        raise ValidationError(f"naive MAE needs at least 2 values, got {len(values)}")
    return math.fsum(np.abs(np.diff(values)).tolist()) / (len(values) - 1)
