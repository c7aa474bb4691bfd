"""
Drift adaptation benchmark for the incremental tree models
Generates rolling-error and model-size curves in a simple array format for graphing
"""

import json
import time
import sys
import os
from typing import List, Dict, Any
from joblib import Parallel, delayed

# Add src to path to import modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cpustream.data.Synthetic import concept_flip_dataset
from cpustream.ensembles import AdaptiveRandomForest, EnsembleConfig, StreamingRandomPatches
from cpustream.hoeffding import HatTree, HoeffdingTree
from cpustream.metrics.Footprint import model_memory_bytes


class Benchmark:
    """Benchmark suite comparing HT, HAT, ARF and SRP on an abrupt concept flip"""

    def __init__(self, n_instances: int = 40_000, n_seeds: int = 5, report_every: int = 500):
        self.n_instances = n_instances
        self.n_seeds = n_seeds
        self.report_every = report_every
        self.error_metrics: List[Dict[str, Any]] = []
        self.summary_metrics: List[Dict[str, Any]] = []

    @staticmethod
    def build_models(seed: int) -> Dict[str, Any]:
        return {
            "ht": HoeffdingTree(2),
            "hat": HatTree(2, seed=seed),
            "arf": AdaptiveRandomForest(2, EnsembleConfig(seed=seed)),
            "srp": StreamingRandomPatches(2, EnsembleConfig(seed=seed)),
        }

    def run_all(self) -> None:
        """Run all benchmark tests"""
        print("Starting drift adaptation benchmarks...\n")
        flip_at = self.n_instances // 2

        # seeds run in parallel; each returns its own rows
        per_seed = Parallel(n_jobs=-1)(delayed(self.run_seed)(seed, flip_at) for seed in range(self.n_seeds))
        for error_rows, summary_rows in per_seed:
            self.error_metrics.extend(error_rows)
            self.summary_metrics.extend(summary_rows)

        self.summarize(flip_at)
        self.save_results()
        print("\nBenchmarks completed!")
        print("  - Rolling error curves saved to benchmarks/graph_drift_error.json")
        print("  - Post-flip summary saved to benchmarks/graph_drift_summary.json")

    def run_seed(self, seed: int, flip_at: int):
        dataset = concept_flip_dataset(self.n_instances, seed=seed, flip_at=flip_at)
        error_rows, summary_rows = [], []
        for name, model in self.build_models(seed).items():
            errors, summary = self.benchmark_rolling_error(name, model, dataset, seed, flip_at)
            error_rows.extend(errors)
            summary_rows.append(summary)
        return error_rows, summary_rows

    def benchmark_rolling_error(self, name: str, model, dataset, seed: int, flip_at: int):
        """Benchmark: prequential MAE per block of report_every instances
        Tracks how fast each model recovers once the concept inverts
        """
        print(f"Running: rolling error ({name}, seed {seed})...")
        block_error = 0.0
        post_flip_error = 0.0
        rows = []
        start = time.perf_counter()

        for i, (x, y) in enumerate(dataset.rows()):
            error = abs(model.predict_one(x) - y)
            block_error += error
            if i >= flip_at:
                post_flip_error += error
            model.learn_one(x, y)

            if (i + 1) % self.report_every == 0:
                rows.append(
                    {
                        "model": name,
                        "seed": seed,
                        "instance": i + 1,
                        "after_flip": i >= flip_at,
                        "block_mae": block_error / self.report_every,
                        "model_bytes": model_memory_bytes(model.to_snapshot()),
                    }
                )
                block_error = 0.0

        summary = {
            "model": name,
            "seed": seed,
            "post_flip_mae": post_flip_error / (self.n_instances - flip_at),
            "seconds": time.perf_counter() - start,
        }
        return rows, summary

    def summarize(self, flip_at: int) -> None:
        print(f"\nPost-flip MAE over {self.n_instances - flip_at} instances, {self.n_seeds} seeds:")
        for name in self.build_models(0):
            rows = [m for m in self.summary_metrics if m["model"] == name]
            mean_mae = sum(r["post_flip_mae"] for r in rows) / len(rows)
            mean_seconds = sum(r["seconds"] for r in rows) / len(rows)
            print(f"  {name:>4}: MAE {mean_mae:.4f}  ({mean_seconds:.1f}s per run)")

    def save_results(self) -> None:
        output_dir = os.path.dirname(__file__)

        output_path = os.path.join(output_dir, "graph_drift_error.json")
        sorted_metrics = sorted(
            self.error_metrics, key=lambda m: (m["model"], m["seed"], m["instance"])
        )
        with open(output_path, "w") as f:
            json.dump({"metrics": sorted_metrics}, f, indent=2)
        print(f"\nSaved {len(sorted_metrics)} rolling error entries to {output_path}")

        output_path_summary = os.path.join(output_dir, "graph_drift_summary.json")
        with open(output_path_summary, "w") as f:
            json.dump({"metrics": self.summary_metrics}, f, indent=2)
        print(f"Saved {len(self.summary_metrics)} summary entries to {output_path_summary}")


if __name__ == "__main__":
    benchmark = Benchmark()
    benchmark.run_all()
