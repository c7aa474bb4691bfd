from bisect import bisect_left
from dataclasses import dataclass

# variances below this fraction of (mean^2 + 1) are rounding noise
_VARIANCE_FLOOR = 1e-9


def variance(n: float, total: float, total_sq: float) -> float:
    if n <= 0:
        return 0.0
    mean = total / n
    var = total_sq / n - mean * mean
    if var <= _VARIANCE_FLOOR * (mean * mean + 1.0):
        return 0.0
    return var


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    merit: float


class SplitObserver:
    """
    Bounded binned E-BST for one feature.

    Bin i covers (keys[i-1], keys[i]] and carries (count, sum, sum of squares)
    of the targets that fell in it. Below the cap every distinct value gets
    its own bin; at the cap a new maximum is appended and the adjacent pair
    with the smallest combined count merges into the upper key.
    """

    def __init__(self, max_thresholds: int = 64):
        self.max_thresholds = max_thresholds
        self.keys: list[float] = []
        self.counts: list[float] = []
        self.sums: list[float] = []
        self.sqs: list[float] = []

    def __len__(self) -> int:
        return len(self.keys)

    def update(self, x: float, y: float, w: float = 1.0) -> None:
        i = bisect_left(self.keys, x)
        if i < len(self.keys) and (self.keys[i] == x or len(self.keys) >= self.max_thresholds):
            self.counts[i] += w
            self.sums[i] += w * y
            self.sqs[i] += w * y * y
            return
        self.keys.insert(i, x)
        self.counts.insert(i, w)
        self.sums.insert(i, w * y)
        self.sqs.insert(i, w * y * y)
        if len(self.keys) > self.max_thresholds:
            self._merge_smallest_pair()

    def _merge_smallest_pair(self) -> None:
        j = min(range(len(self.keys) - 1), key=lambda i: self.counts[i] + self.counts[i + 1])
        self.counts[j + 1] += self.counts[j]
        self.sums[j + 1] += self.sums[j]
        self.sqs[j + 1] += self.sqs[j]
        del self.keys[j], self.counts[j], self.sums[j], self.sqs[j]

    def partition(self, threshold: float) -> tuple[float, float, float]:
        """(count, sum, sum of squares) of targets with x <= threshold"""
        n = s = q = 0.0
        for key, count, total, total_sq in zip(self.keys, self.counts, self.sums, self.sqs):
            if key > threshold:
                break
            n += count
            s += total
            q += total_sq
        return n, s, q

    def best_split(self, feature: int, n: float, total: float, total_sq: float):
        """Highest variance reduction over the stored keys, lowest key on ties."""
        if n < 2 or len(self.keys) < 2:
            return None
        parent = variance(n, total, total_sq)
        best_i, best_merit = -1, 0.0
        n_left = s_left = q_left = 0.0
        counts, sums, sqs = self.counts, self.sums, self.sqs
        for i in range(len(self.keys) - 1):
            n_left += counts[i]
            s_left += sums[i]
            q_left += sqs[i]
            n_right = n - n_left
            if n_right <= 0:
                break
            merit = (
                parent
                - (n_left / n) * variance(n_left, s_left, q_left)
                - (n_right / n) * variance(n_right, total - s_left, total_sq - q_left)
            )
            if best_i < 0 or merit > best_merit:
                best_i, best_merit = i, merit
        return None if best_i < 0 else SplitCandidate(feature, self.keys[best_i], best_merit)

    def to_snapshot(self) -> dict:
        # padded to the cap so a leaf costs the same from birth
        pad = [0.0] * (self.max_thresholds - len(self.keys))
        return {
            "keys": self.keys + pad,
            "counts": self.counts + pad,
            "sums": self.sums + pad,
            "sqs": self.sqs + pad,
            "size": len(self.keys),
        }
