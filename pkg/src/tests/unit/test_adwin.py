import math
import pytest
import numpy as np
from src.cpustream.driftdetect.Adwin import AdwinDetector, DriftSignal, adwin_cut_threshold
from src.cpustream.errors import ValidationError


def bernoulli_stream(seed: int, n: int, p: float) -> list[float]:
    return (np.random.default_rng(seed).random(n) < p).astype(float).tolist()


def count_changes(detector: AdwinDetector, values) -> int:
    return sum(bool(detector.update(v)) for v in values)


class TestCutThreshold:
    """Tests for the ADWIN cut bound"""

    def test_spot_value(self):
        """Test n0=n1=100, var=0.25, delta'=0.002 gives 0.35493"""
        assert adwin_cut_threshold(100, 100, 0.25, 0.002) == pytest.approx(0.35493, abs=1e-5)

    def test_zero_variance(self):
        """Test zero variance leaves only the linear term"""
        m = 50.0
        expected = (2.0 / (3.0 * m)) * math.log(2.0 / 0.002)
        assert adwin_cut_threshold(100, 100, 0.0, 0.002) == pytest.approx(expected, rel=1e-12)

    def test_monotonic(self):
        """Test more data on both sides tightens the bound"""
        for n in (5, 50, 500):
            assert adwin_cut_threshold(2 * n, 2 * n, 0.1, 0.01) < adwin_cut_threshold(n, n, 0.1, 0.01)
        assert adwin_cut_threshold(100, 60, 0.1, 0.01) < adwin_cut_threshold(100, 30, 0.1, 0.01)

    @pytest.mark.parametrize("n0,n1", [(0, 10), (10, 0)])
    def test_zero_count(self, n0, n1):
        """Test an empty subwindow is rejected"""
        with pytest.raises(ValidationError):
            adwin_cut_threshold(n0, n1, 0.1, 0.01)


class TestAdwinDetector:
    """Tests for AdwinDetector"""

    def test_first_update(self):
        """Test the first update never signals"""
        detector = AdwinDetector()
        assert detector.update(1.0) is DriftSignal.NONE
        assert detector.n == 1 and detector.estimation == 1.0

    def test_non_finite(self):
        """Test non-finite inputs are rejected"""
        detector = AdwinDetector()
        with pytest.raises(ValidationError):
            detector.update(float("nan"))
        with pytest.raises(ValidationError):
            detector.update(float("inf"))

    def test_invalid_delta(self):
        """Test delta outside (0, 1) is rejected"""
        with pytest.raises(ValidationError):
            AdwinDetector(delta=0.0)

    def test_mean_matches_retained_values(self):
        """Test the window mean equals the mean of the newest n values"""
        rng = np.random.default_rng(3)
        values = np.concatenate((rng.random(4000) * 0.3, 0.7 + rng.random(4000) * 0.3)).tolist()
        detector = AdwinDetector()
        seen = []
        for v in values:
            seen.append(v)
            before = detector.n
            if detector.update(v):
                assert detector.n < before + 1
            retained = seen[-detector.n:]
            assert detector.estimation == pytest.approx(math.fsum(retained) / len(retained), rel=1e-9, abs=1e-12)
        assert detector.n_detections >= 1
        assert detector.n < len(values)

    def test_aggregates_consistent(self):
        """Test n and totals equal the bucket aggregates"""
        detector = AdwinDetector()
        for v in bernoulli_stream(4, 3000, 0.3):
            detector.update(v)
        levels = detector.to_snapshot()["levels"]
        assert detector.n == sum(len(level) << i for i, level in enumerate(levels))
        assert detector.total == pytest.approx(sum(b[0] for level in levels for b in level), rel=1e-9)
        assert all(len(level) <= detector.max_buckets for level in levels)

    def test_bucket_count_bound(self):
        """Test bucket count stays within M * (floor(log2 n) + 1)"""
        detector = AdwinDetector()
        for i in range(1, 50_001):
            detector.update(0.5)
            if i & (i - 1) == 0 or i % 997 == 0:
                assert detector.bucket_count <= detector.max_buckets * (math.floor(math.log2(detector.n)) + 1)
        assert detector.n == 50_000

    def test_stationary_few_false_positives(self):
        """Test a stationary Bernoulli(0.5) stream rarely signals"""
        changes = [count_changes(AdwinDetector(delta=0.002), bernoulli_stream(seed, 20_000, 0.5)) for seed in range(5)]
        assert sum(changes) / len(changes) <= 1

    def test_detects_mean_increase(self):
        """Test a 0.2 -> 0.8 switch is signalled within 300 updates"""
        for seed in range(5):
            detector = AdwinDetector(delta=0.002)
            count_changes(detector, bernoulli_stream(seed, 2000, 0.2))
            after = bernoulli_stream(seed + 100, 300, 0.8)
            signals = [i for i, v in enumerate(after) if detector.update(v)]
            assert signals, f"seed {seed} missed the switch"
            assert detector.drift_increased

    def test_reset(self):
        """Test reset empties the window"""
        detector = AdwinDetector()
        for v in range(100):
            detector.update(float(v))
        detector.reset()
        assert detector.n == 0 and detector.bucket_count == 0 and detector.n_detections == 0


@pytest.mark.slow
class TestAdwinMonteCarlo:
    """Full-size false-positive and detection-delay runs"""

    def test_stationary_false_positives(self):
        """Test mean Change count per 10^5-update stationary run is at most one"""
        changes = [count_changes(AdwinDetector(), bernoulli_stream(seed, 100_000, 0.5)) for seed in range(20)]
        assert np.mean(changes) <= 1

    def test_detection_delay(self):
        """Test every one of 20 runs detects the switch within 300 updates"""
        for seed in range(20):
            detector = AdwinDetector()
            count_changes(detector, bernoulli_stream(seed, 2000, 0.2))
            after = bernoulli_stream(seed + 1000, 300, 0.8)
            assert any(detector.update(v) for v in after)
