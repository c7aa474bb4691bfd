from .Accumulator import (
    METRIC_NAMES,
    MetricAccumulator,
    MetricReport,
    Footprint,
    metrics_update,
    metrics_finalize,
    naive_mae,
)
from .Footprint import model_memory_bytes, Stopwatch
