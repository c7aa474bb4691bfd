import math
import pytest
import numpy as np
from src.cpustream.data.Synthetic import (
    SynthConfig,
    workload_blocks,
    generate_synthetic_workload,
    step_function_dataset,
    concept_flip_dataset,
)
from src.cpustream.errors import ValidationError


class TestSynthConfig:
    """Tests for SynthConfig validation"""

    def test_total_shorter_than_workload(self):
        """Test total_minutes must cover one workload block"""
        with pytest.raises(ValidationError, match="total_minutes"):
            SynthConfig(total_minutes=30, workload_minutes=60)

    def test_negative_noise(self):
        """Test noise_std must be non-negative"""
        with pytest.raises(ValidationError, match="noise_std"):
            SynthConfig(noise_std=-1.0)


class TestGenerator:
    """Tests for the synthetic workload generator"""

    def test_deterministic(self):
        """Test the same seed gives the same trace"""
        cfg = SynthConfig(seed=11, total_minutes=500)
        assert generate_synthetic_workload(cfg) == generate_synthetic_workload(cfg)

    def test_different_seeds_differ(self):
        """Test a different seed gives a different trace"""
        a = generate_synthetic_workload(SynthConfig(seed=1, total_minutes=200))
        b = generate_synthetic_workload(SynthConfig(seed=2, total_minutes=200))
        assert not np.array_equal(a.values, b.values)

    def test_length_and_spacing(self):
        """Test total_minutes points on a 60-second grid"""
        series = generate_synthetic_workload(SynthConfig(seed=0, total_minutes=300))
        assert len(series) == 300
        assert np.all(np.diff(series.timestamps) == 60.0)

    def test_zero_noise_blocks_constant(self):
        """Test every block is constant without noise"""
        cfg = SynthConfig(seed=5, total_minutes=400, noise_std=0.0)
        series = generate_synthetic_workload(cfg)
        for block in workload_blocks(cfg):
            values = series.values[block.start_minute:block.start_minute + block.minutes]
            assert np.all(values == values[0])

    def test_block_schedule(self):
        """Test 122 minutes of 60/60s blocks pause at minutes 60-61 and 121-122"""
        cfg = SynthConfig(seed=0, total_minutes=122, workload_minutes=60, pause_seconds=60)
        blocks = workload_blocks(cfg)
        assert [(b.start_minute, b.minutes, b.is_pause) for b in blocks] == [
            (0, 60, False),
            (60, 1, True),
            (61, 60, False),
            (121, 1, True),
        ]
        assert all(0.0 <= b.level <= 5.0 for b in blocks if b.is_pause)

    def test_pause_rounds_up_to_a_minute(self):
        """Test a 30-second pause takes one whole minute"""
        cfg = SynthConfig(seed=0, total_minutes=130, workload_minutes=60, pause_seconds=30)
        assert [b.minutes for b in workload_blocks(cfg) if b.is_pause] == [1, 1]

    def test_values_in_range(self):
        """Test clamping keeps every value in [0, 100] even with heavy noise"""
        series = generate_synthetic_workload(SynthConfig(seed=9, total_minutes=2000, noise_std=40.0))
        assert series.values.min() >= 0.0 and series.values.max() <= 100.0

    def test_block_means_track_levels(self):
        """Test block means stay within 3 sigma / sqrt(minutes) of their level"""
        cfg = SynthConfig(seed=21, total_minutes=61 * 120, noise_std=2.0)
        series = generate_synthetic_workload(cfg)
        bound = 3 * cfg.noise_std / math.sqrt(cfg.workload_minutes)
        checked = violations = 0
        for block in workload_blocks(cfg):
            # levels near the clamp edges are biased by clipping
            if block.is_pause or not 10.0 <= block.level <= 90.0:
                continue
            values = series.values[block.start_minute:block.start_minute + block.minutes]
            checked += 1
            violations += abs(values.mean() - block.level) > bound
        assert checked > 50
        assert violations <= 0.05 * checked


class TestStreamHelpers:
    """Tests for the labelled synthetic datasets"""

    def test_step_function_targets(self):
        """Test the step function takes only its two levels"""
        dataset = step_function_dataset(500, seed=1)
        assert set(np.unique(dataset.targets)) == {2.0, 10.0}

    def test_concept_flip(self):
        """Test the relation inverts after the flip point"""
        dataset = concept_flip_dataset(1000, seed=1, noise_std=0.0)
        before = dataset.targets[:500] - 10 * dataset.features[:500, 0]
        after = dataset.targets[500:] - (10 - 10 * dataset.features[500:, 0])
        assert np.allclose(before, 0) and np.allclose(after, 0)
