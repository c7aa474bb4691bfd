import math
import time
import numpy as np

# logical byte costs
STRUCT_OVERHEAD = 16
NUMBER_BYTES = 8
FLAG_BYTES = 1


def model_memory_bytes(snapshot) -> int:
    """
    Deterministic logical size of a model snapshot.

    dict and list: 16 plus their contents (dict keys are free); float and
    int: 8; bool: 1; str: its UTF-8 length; None: 0.
    """
    if snapshot is None:
        return 0
    if isinstance(snapshot, (bool, np.bool_)):
        return FLAG_BYTES
    if isinstance(snapshot, (int, float, np.integer, np.floating)):
        return NUMBER_BYTES
    if isinstance(snapshot, str):
        return len(snapshot.encode("utf-8"))
    if isinstance(snapshot, dict):
        return STRUCT_OVERHEAD + sum(model_memory_bytes(v) for v in snapshot.values())
    if isinstance(snapshot, (list, tuple)):
        return STRUCT_OVERHEAD + sum(model_memory_bytes(v) for v in snapshot)
    raise TypeError(f"cannot size snapshot value of type {type(snapshot).__name__}")


class Stopwatch:
    """Monotonic timer; seconds are rounded up to the millisecond."""

    def __init__(self):
        self._start = None
        self._elapsed = 0.0

    def __enter__(self) -> "Stopwatch":
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc) -> None:
        self._elapsed += time.perf_counter() - self._start
        self._start = None

    @property
    def seconds(self) -> float:
        return max(math.ceil(self._elapsed * 1000.0), 1) / 1000.0
