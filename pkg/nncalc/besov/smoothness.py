"""Moduli of smoothness and discretized Besov quasi-norms on an interval"""
import logging
import math
from typing import Callable, Tuple

import numpy as np
from scipy.special import binom

from ..constants import MODULUS_H_COUNT, MODULUS_PANELS
from ..errors import ApproximationDomainError
from ..interface import BesovEstimate

logger = logging.getLogger(__name__)

Function = Callable[[np.ndarray], np.ndarray]


def _midpoints(interval: Tuple[float, float], panels: int) -> Tuple[np.ndarray, float]:
    a, b = interval
    width = (b - a) / panels
    return a + (np.arange(panels) + 0.5) * width, width


def finite_difference(f: Function, x: np.ndarray, h: float, r: int, interval: Tuple[float, float]) -> np.ndarray:
    """
    Delta_h^r f(x) = sum_i binom(r, i) (-1)^(r-i) f(x + i h), set to zero where x + r h leaves the interval
    """
    total = np.zeros_like(x)
    for i in range(r + 1):
        total = total + binom(r, i) * (-1.0) ** (r - i) * np.asarray(f(x + i * h), dtype=np.float64)
    inside = (x + r * h) <= interval[1]
    return np.where(inside, total, 0.0)


def lp_norm(values: np.ndarray, width: float, p: float) -> float:
    """Midpoint-rule L^p (quasi-)norm of sampled values"""
    return float(np.sum(np.abs(values) ** p) * width) ** (1.0 / p)


def modulus_of_smoothness(
    f: Function,
    interval: Tuple[float, float] = (0.0, 1.0),
    r: int = 1,
    p: float = 2.0,
    t: float = 0.1,
    h_count: int = MODULUS_H_COUNT,
    panels: int = MODULUS_PANELS,
) -> float:
    """
    Grid estimate of omega_r(f, t)_p = sup_{0 < h <= t} ||Delta_h^r f||_p.
    The sup runs over `h_count` equispaced h in (0, t], so the result bounds the true modulus from below.
    Negative shifts give the same norms and are not sampled.
    :param f: vectorized callable
    :param interval: (a, b)
    :param r: order of the difference
    :param p: exponent in (0, inf)
    :param t: scale
    :param h_count: number of shifts
    :param panels: midpoint panels of the L^p integral
    :return:
    """
    if r < 1:
        raise ApproximationDomainError(f'difference order must be at least 1, got {r}')
    if not t > 0:
        raise ApproximationDomainError(f't must be positive, got {t}')
    if not 0 < p < math.inf:
        raise ApproximationDomainError(f'p must lie in (0, inf), got {p}')
    x, width = _midpoints(interval, panels)
    shifts = t * np.arange(1, h_count + 1) / h_count
    return max(lp_norm(finite_difference(f, x, h, r, interval), width, p) for h in shifts)


def besov_seminorm_discrete(
    f: Function,
    alpha: float,
    p: float,
    q: float,
    k_max: int,
    interval: Tuple[float, float] = (0.0, 1.0),
) -> BesovEstimate:
    """
    (sum_{k=1}^{k_max} (2^(alpha k) omega_r(f, 2^-k)_p)^q)^(1/q) with r = ceil(alpha),
    the sup of the terms for q = inf
    """
    if not alpha > 0:
        raise ApproximationDomainError(f'alpha must be positive, got {alpha}')
    if not q > 0:
        raise ApproximationDomainError(f'q must be positive, got {q}')
    r = math.ceil(alpha)
    terms = tuple(
        2.0 ** (alpha * k) * modulus_of_smoothness(f, interval, r, p, 2.0 ** -k)
        for k in range(1, k_max + 1)
    )
    if not terms:
        value = 0.0
    elif math.isinf(q):
        value = max(terms)
    else:
        value = float(sum(term ** q for term in terms) ** (1.0 / q))
    logger.debug('Besov seminorm alpha=%s p=%s q=%s: %s terms, last %s', alpha, p, q, len(terms), terms[-1:] or None)
    return BesovEstimate(value=value, r=r, k_max=k_max, terms=terms, last_term=terms[-1] if terms else 0.0)


def besov_norm_discrete(
    f: Function,
    alpha: float,
    p: float,
    q: float,
    k_max: int,
    interval: Tuple[float, float] = (0.0, 1.0),
    panels: int = MODULUS_PANELS,
) -> float:
    """||f||_p plus the discretized seminorm"""
    x, width = _midpoints(interval, panels)
    base = lp_norm(np.asarray(f(x), dtype=np.float64), width, p)
    return base + besov_seminorm_discrete(f, alpha, p, q, k_max, interval).value
