"""Random test inputs and order-independent error sweeps"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

from .errors import ApproximationDomainError
from .linalg import spectral_norm

logger = logging.getLogger(__name__)

T = TypeVar('T')

# attempts per accepted sample before rejection sampling gives up
_REJECTION_BUDGET = 1000


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


def sample_bounded_matrices(
    rng: np.random.Generator,
    shape: Sequence[int],
    bound: float,
    count: int,
) -> List[np.ndarray]:
    """
    Matrices with entries uniform in [-bound, bound], kept only when ||A||_2 <= bound
    :param rng: random generator
    :param shape: (rows, cols)
    :param bound: spectral norm bound
    :param count: number of matrices to return
    :return:
    """
    accepted: List[np.ndarray] = []
    attempts = 0
    while len(accepted) < count:
        attempts += 1
        if attempts > _REJECTION_BUDGET * max(count, 1):
            raise ApproximationDomainError(
                f'rejection sampling accepted {len(accepted)} of {count} matrices of shape {tuple(shape)}'
            )
        candidate = rng.uniform(-bound, bound, size=tuple(shape))
        if spectral_norm(candidate) <= bound:
            accepted.append(candidate)
    logger.debug('rejection sampling: %s accepted out of %s draws', count, attempts)
    return accepted


def sample_contractions(rng: np.random.Generator, d: int, bound: float, count: int) -> List[np.ndarray]:
    """d x d matrices with ||A||_2 = u * bound, u uniform in [0, 1]"""
    matrices = []
    for _ in range(count):
        raw = rng.normal(size=(d, d))
        norm = spectral_norm(raw)
        scale = rng.uniform(0.0, 1.0) * bound
        matrices.append(raw * (scale / norm) if norm > 0 else raw)
    return matrices


def max_error(func: Callable[[T], float], samples: Iterable[T], workers: int = 1) -> float:
    """max of func over samples, evaluated on `workers` threads"""
    samples = list(samples)
    if not samples:
        return 0.0
    if workers <= 1:
        return max(func(sample) for sample in samples)
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix='nncalc-verify') as pool:
        return max(pool.map(func, samples))
