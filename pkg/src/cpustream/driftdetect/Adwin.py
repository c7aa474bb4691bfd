import math
import logging
from collections import deque
from enum import Enum
from ..errors import ValidationError

logger = logging.getLogger(__name__)


class DriftSignal(Enum):
    NONE = 0
    CHANGE = 1

    def __bool__(self) -> bool:
        return self is DriftSignal.CHANGE


def adwin_cut_threshold(n0: int, n1: int, variance: float, delta_prime: float) -> float:
    """
    eps_cut = sqrt((2/m) * var * ln(2/d')) + (2 / (3m)) * ln(2/d')
    with m = 1 / (1/n0 + 1/n1)
    """
    if n0 < 1 or n1 < 1:
        raise ValidationError(f"subwindow counts must be >= 1, got {n0} and {n1}")
    if variance < 0:
        raise ValidationError(f"variance must be >= 0, got {variance}")
    if not 0.0 < delta_prime < 1.0:
        raise ValidationError(f"delta' must be in (0, 1), got {delta_prime}")
    return _eps_cut(n0, n1, variance, math.log(2.0 / delta_prime))


def _eps_cut(n0: int, n1: int, variance: float, log_term: float) -> float:
    m = 1.0 / (1.0 / n0 + 1.0 / n1)
    return math.sqrt((2.0 / m) * variance * log_term) + (2.0 / (3.0 * m)) * log_term


class AdwinDetector:
    """
    ADWIN change detector over an exponential histogram.

    Level i holds buckets of exactly 2**i values, oldest on the left; higher
    levels hold older data. Each bucket is a [sum, sum_of_squares] pair.
    """

    def __init__(
        self,
        delta: float = 0.002,
        max_buckets: int = 5,
        min_clock: int = 32,
        min_window_length: int = 5,
    ):
        if not 0.0 < delta < 1.0:
            raise ValidationError(f"delta must be in (0, 1), got {delta}")
        if max_buckets < 2:
            raise ValidationError(f"max_buckets must be >= 2, got {max_buckets}")
        if min_clock < 1 or min_window_length < 1:
            raise ValidationError("min_clock and min_window_length must be >= 1")
        self.delta = delta
        self.max_buckets = max_buckets
        self.min_clock = min_clock
        self.min_window_length = min_window_length
        self.reset()

    def reset(self) -> None:
        self._levels: list[deque] = [deque()]
        self._n = 0
        self._total = 0.0
        self._total_sq = 0.0
        self._clock = 0
        self.n_detections = 0
        self.drift_increased = False

    @property
    def n(self) -> int:
        return self._n

    @property
    def width(self) -> int:
        return self._n

    @property
    def total(self) -> float:
        return self._total

    @property
    def estimation(self) -> float:
        return self._total / self._n if self._n else 0.0

    @property
    def variance(self) -> float:
        if self._n == 0:
            return 0.0
        mean = self._total / self._n
        return max(self._total_sq / self._n - mean * mean, 0.0)

    @property
    def bucket_count(self) -> int:
        return sum(len(level) for level in self._levels)

    def update(self, value: float) -> DriftSignal:
        if not math.isfinite(value):
            raise ValidationError(f"ADWIN input must be finite, got {value}")
        self._insert(value)
        self._clock += 1
        if self._clock % self.min_clock:
            return DriftSignal.NONE
        return self._detect()

    def _insert(self, value: float) -> None:
        self._levels[0].append([value, value * value])
        self._n += 1
        self._total += value
        self._total_sq += value * value

        level = 0
        while len(self._levels[level]) > self.max_buckets:
            first = self._levels[level].popleft()
            second = self._levels[level].popleft()
            if level + 1 == len(self._levels):
                self._levels.append(deque())
            self._levels[level + 1].append([first[0] + second[0], first[1] + second[1]])
            level += 1

    def _find_cut(self):
        """returns (buckets in W0, increased) for the first satisfying split or None"""
        n_splits = self.bucket_count - 1
        if n_splits < 1:
            return None
        log_term = math.log(2.0 / (self.delta / n_splits))
        variance = self.variance
        n, total, min_length = self._n, self._total, self.min_window_length

        # oldest first: highest level, left to right
        n0, sum0, index = 0, 0.0, 0
        for level in range(len(self._levels) - 1, -1, -1):
            size = 1 << level
            for bucket in self._levels[level]:
                index += 1
                n0 += size
                sum0 += bucket[0]
                n1 = n - n0
                if n1 < min_length:
                    return None
                if n0 < min_length:
                    continue
                mean0 = sum0 / n0
                mean1 = (total - sum0) / n1
                if abs(mean0 - mean1) >= _eps_cut(n0, n1, variance, log_term):
                    return index, mean1 > mean0
        return None

    def _drop_oldest(self, n_buckets: int) -> None:
        for _ in range(n_buckets):
            level = len(self._levels) - 1
            while not self._levels[level]:
                level -= 1
            bucket = self._levels[level].popleft()
            self._n -= 1 << level
            self._total -= bucket[0]
            self._total_sq -= bucket[1]
        while len(self._levels) > 1 and not self._levels[-1]:
            self._levels.pop()
        if self._n == 0:
            self._total = self._total_sq = 0.0

    def _detect(self) -> DriftSignal:
        changed = False
        while True:
            cut = self._find_cut()
            if cut is None:
                break
            n_buckets, increased = cut
            if not changed:
                self.drift_increased = increased
            changed = True
            before = self._n
            self._drop_oldest(n_buckets)
            logger.debug(f"ADWIN cut: window {before} -> {self._n}")
        if changed:
            self.n_detections += 1
            return DriftSignal.CHANGE
        return DriftSignal.NONE

    def to_snapshot(self) -> dict:
        return {
            "kind": "adwin",
            "delta": self.delta,
            "n": self._n,
            "total": self._total,
            "total_sq": self._total_sq,
            "levels": [[list(bucket) for bucket in level] for level in self._levels],
        }
