from .TimeSeries import TimeSeries, parse_csv, load_csv, write_csv, resample_1min
from .LagDataset import (
    LagInstance,
    LagDataset,
    make_lag_dataset,
    chronological_split,
    split_series,
    make_holdout_datasets,
)
from .Synthetic import (
    SynthConfig,
    WorkloadBlock,
    default_synth_config,
    workload_blocks,
    generate_synthetic_workload,
    step_function_dataset,
    concept_flip_dataset,
    linear_dataset,
)
