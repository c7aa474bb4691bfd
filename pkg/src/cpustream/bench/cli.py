import argparse
import json
import logging
import sys
from pathlib import Path
from ..data.Synthetic import SynthConfig, generate_synthetic_workload
from ..data.TimeSeries import write_csv
from ..errors import ConfigError, ValidationError
from ..snapshot.Snapshot import describe_snapshot, load_snapshot
from .Models import build_model
from .Report import FORMATS, write_report, write_runs
from .RunConfig import DataSource, DEFAULT_WINDOW_SIZES, PROTOCOLS
from .Suite import expand_configs, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_PARTIAL = 4

INCREMENTAL_MODELS = "ht,hat,arf,srp,sgd,pa"
BATCH_MODELS = "ols,cart,rf"


def _csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench", description="Online CPU-utilization forecasting benchmark"
    )
    parser.add_argument("--log-level", default="INFO", help="logging level (default INFO)")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a benchmark suite and write a report")
    run.add_argument("--protocol", choices=PROTOCOLS, default="prequential")
    run.add_argument(
        "--models", type=_csv_list,
        help=f"default {INCREMENTAL_MODELS}, plus {BATCH_MODELS} for holdout or with --refit-interval",
    )
    run.add_argument("--window-sizes", type=_int_list, default=list(DEFAULT_WINDOW_SIZES))
    run.add_argument("--seeds", type=int, default=20, help="seeds per (model, window size)")
    run.add_argument("--suite-seed", type=int, default=42)
    run.add_argument("--train", help="training CSV (timestamp,cpu_util)")
    run.add_argument("--test", help="test CSV (timestamp,cpu_util)")
    run.add_argument("--data", help="single CSV split chronologically 80/20")
    run.add_argument("--synth-minutes", type=int, help="use a synthetic trace of this many minutes")
    run.add_argument("--synth-seed", type=int, default=0)
    run.add_argument("--pretrain", action="store_true", help="pretrain on the train set (prequential)")
    run.add_argument("--refit-interval", type=int, help="batch-in-the-loop refit interval")
    run.add_argument("--model-params", default="{}", help='JSON object, e.g. {"arf": {"n_models": 5}}')
    run.add_argument("--out", required=True)
    run.add_argument("--format", choices=FORMATS, default="json")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--timings", action="store_true", help="include wall-clock timings in JSON")
    run.add_argument("--runs-out", help="also write per-seed results as CSV")
    run.add_argument("--snapshot-dir", help="save every cell's final model snapshot here")

    synth = commands.add_parser("synth", help="write a synthetic workload trace as CSV")
    synth.add_argument("--minutes", type=int, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--workload-minutes", type=int, default=60)
    synth.add_argument("--pause-seconds", type=int, default=60)
    synth.add_argument("--noise-std", type=float, default=2.0)
    synth.add_argument("--out", required=True)

    inspect = commands.add_parser("inspect", help="describe a saved model snapshot")
    inspect.add_argument("--model-snapshot", required=True)
    return parser


def _data_source(args) -> DataSource:
    synth = None
    if args.synth_minutes is not None:
        synth = SynthConfig(seed=args.synth_seed, total_minutes=args.synth_minutes)
    return DataSource(train_path=args.train, test_path=args.test, data_path=args.data, synth=synth)


def _model_params(text: str) -> dict:
    try:
        params = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"--model-params is not valid JSON: {e}") from e
    if not isinstance(params, dict) or not all(isinstance(v, dict) for v in params.values()):
        raise ConfigError("--model-params must map model names to objects")
    return params


def default_models(protocol: str, refit_interval) -> list[str]:
    if protocol == "prequential" and refit_interval is None:
        return _csv_list(INCREMENTAL_MODELS)
    return _csv_list(INCREMENTAL_MODELS + "," + BATCH_MODELS)


def _check_models(cfgs) -> None:
    """Build each (model, window size) once so bad hyperparameters fail before any cell runs."""
    for cfg in {(c.model, c.window_size): c for c in cfgs}.values():
        build_model(cfg.model, cfg.window_size, cfg.cell_seed, cfg.params)


def cmd_run(args) -> int:
    try:
        if args.seeds < 1 or args.workers < 1:
            raise ConfigError("--seeds and --workers must be >= 1")
        source = _data_source(args)
        cfgs = expand_configs(
            protocol=args.protocol,
            models=args.models or default_models(args.protocol, args.refit_interval),
            window_sizes=args.window_sizes,
            n_seeds=args.seeds,
            suite_seed=args.suite_seed,
            pretrain=args.pretrain,
            refit_interval=args.refit_interval,
            params_by_model=_model_params(args.model_params),
            data=source,
        )
        _check_models(cfgs)
    except ValidationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG

    try:
        data = source.load()
    except (ValidationError, OSError) as e:
        logger.error(f"Data error: {e}")
        return EXIT_DATA

    report = run_suite(cfgs, data, workers=args.workers, snapshot_dir=args.snapshot_dir)
    write_report(report, args.out, args.format, include_timings=args.timings)
    if args.runs_out:
        write_runs(report, args.runs_out)
    return EXIT_PARTIAL if report.failures else EXIT_OK


def cmd_synth(args) -> int:
    try:
        cfg = SynthConfig(
            seed=args.seed,
            total_minutes=args.minutes,
            workload_minutes=args.workload_minutes,
            pause_seconds=args.pause_seconds,
            noise_std=args.noise_std,
        )
    except ValidationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    Path(args.out).write_text(write_csv(generate_synthetic_workload(cfg)), encoding="utf-8")
    logger.info(f"Wrote {cfg.total_minutes} synthetic points to {args.out}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    try:
        snapshot = load_snapshot(args.model_snapshot)
    except (ValidationError, OSError) as e:
        logger.error(f"Cannot read snapshot: {e}")
        return EXIT_DATA
    for key, value in describe_snapshot(snapshot).items():
        print(f"{key}: {value}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "synth": cmd_synth, "inspect": cmd_inspect}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
