"""Bump network: a relu^r network equal to 1 on [delta, 1 - delta]^d and 0 off [0, 1]^d"""
import logging
from typing import Optional

import numpy as np
from scipy.special import binom, factorial

from ..besov.splines import bump, check_bump_params
from ..errors import ApproximationDomainError
from ..interface import ErrorCertificate, SizeReport
from ..network import NeuralNetwork, from_weights_strict, realize_batch
from ..sampling import make_rng
from .base import BaseBuilder, log_size

logger = logging.getLogger(__name__)


def _step_coefficients(r: int) -> np.ndarray:
    """sigma(s) = sum_j c_j relu(s - j)^r for j = 0..r"""
    j = np.arange(r + 1)
    return binom(r, j) * (-1.0) ** j / factorial(r)


@log_size
def build_bump_network(r: int, d: int, delta: float) -> NeuralNetwork:
    """
    Depth three relu^r network for phi(x) = sigma(r (sum_k psi(x_k) - d + 1)),
    psi(t) = sigma(r t / delta) - sigma(r (t + delta - 1) / delta).
    Layer one holds 2(r + 1) neurons per coordinate, layer two the r + 1 pieces of the outer sigma.
    """
    check_bump_params(r, delta)
    if d < 1:
        raise ApproximationDomainError(f'dimension must be positive, got {d}')
    c = _step_coefficients(r)
    shifts = np.arange(r + 1, dtype=np.float64)
    width = 2 * (r + 1)

    first_A = np.zeros((width * d, d))
    first_b = np.zeros(width * d)
    second_A = np.zeros((r + 1, width * d))
    for k in range(d):
        rows = slice(k * width, (k + 1) * width)
        first_A[rows, k] = r / delta
        first_b[rows] = np.concatenate([-shifts, r * (delta - 1.0) / delta - shifts])
        second_A[:, rows] = r * np.concatenate([c, -c])
    second_b = -r * (d - 1.0) - shifts
    weights = [
        (first_A, first_b),
        (second_A, second_b),
        (c.reshape(1, -1), np.zeros(1)),
    ]
    return from_weights_strict(weights, r)


def bump_network_error(
    r: int,
    d: int,
    delta: float,
    samples: int = 500,
    seed: Optional[int] = 0,
) -> ErrorCertificate:
    """max |R(x) - phi(x)| over uniform samples in [-1/2, 3/2]^d"""
    net = build_bump_network(r, d, delta)
    points = make_rng(seed).uniform(-0.5, 1.5, size=(samples, d))
    values = realize_batch(net, points)[:, 0]
    reference = np.array([bump(r, d, delta, x) for x in points])
    return ErrorCertificate(
        claimed_bound=1e-9,
        measured_error=float(np.max(np.abs(values - reference))),
        sample_description=f'{samples} uniform points in [-1/2, 3/2]^{d}',
        samples=samples,
        seed=seed,
    )


class BumpBuilder(BaseBuilder):
    """relu^r bump network"""

    name = 'bump'

    def __init__(self, r: int, d: int, delta: float):
        self.r = r
        self.d = d
        self.delta = delta

    def _build(self) -> NeuralNetwork:
        return build_bump_network(self.r, self.d, self.delta)

    def certify(self, samples: int = 0, seed: Optional[int] = None) -> ErrorCertificate:
        return bump_network_error(self.r, self.d, self.delta, samples or 500, seed)

    def size_bound(self, report: SizeReport) -> bool:
        return report.layers == 3 and report.neurons == 2 * (self.r + 1) * self.d + self.r + 1
