import xxhash
import numpy as np

_MASK_64 = (1 << 64) - 1


def mix_seed(suite_seed: int, *parts) -> int:
    """
    Derive an independent 64-bit seed from a parent seed and labels.

    The parts are joined as text, so mix_seed(42, "arf", 6, 3) hashes
    "arf|6|3" with xxh64 keyed by the parent seed. Changing any part of
    one cell never changes the seed of another cell.
    """
    key = "|".join(str(part) for part in parts)
    return xxhash.xxh64_intdigest(key, seed=int(suite_seed) & _MASK_64)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & _MASK_64)
