from .Models import build_model, PersistenceModel, FrozenModel, MODEL_ORDER
from .RunConfig import RunConfig, RunResult, DataSource, PreparedData, DatasetFingerprint
from .Protocols import run_holdout, run_prequential, evaluate_holdout, evaluate_prequential
from .Suite import SummaryReport, CellSummary, CellFailure, Stat, expand_configs, run_suite
from .Report import write_report, read_report, write_runs, CSV_COLUMNS
