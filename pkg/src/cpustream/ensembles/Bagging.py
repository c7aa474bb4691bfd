import math
import numpy as np
from ..errors import ValidationError

# exp(-lam) underflows near 745; above this the inversion hands off to numpy
INVERSION_MAX_LAMBDA = 500.0


def poisson_weight(rng: np.random.Generator, lam: float) -> int:
    """
    Poisson(lam) draw.

    Small lambdas invert the CDF from a single uniform, so a member consumes
    exactly one value of its stream per instance. Larger ones use
    Generator.poisson.
    """
    if lam < 0 or not math.isfinite(lam):
        raise ValidationError(f"lambda must be a finite value >= 0, got {lam}")
    if lam == 0:
        return 0
    if lam > INVERSION_MAX_LAMBDA:
        return int(rng.poisson(lam))
    u = rng.random()
    k = 0
    p = math.exp(-lam)
    cdf = p
    while u > cdf:
        k += 1
        p *= lam / k
        if p == 0.0:
            break
        cdf += p
    return k
