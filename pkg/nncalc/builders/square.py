"""Square network: the interpolant of x^2 on the dyadic grid of level m-1"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..constants import MAX_SQUARE_LEVEL, MIN_SQUARE_LEVEL
from ..errors import ApproximationDomainError
from ..interface import ErrorCertificate, SizeReport
from ..network import NeuralNetwork, from_weights_strict, realize_batch
from .base import BaseBuilder, log_size

logger = logging.getLogger(__name__)

# first layer and shared bias: relu(x), relu(x - 1/2), relu(x - 1), relu(x)
_ALPHA = np.ones((4, 1))
_BIAS = np.array([0.0, -0.5, -1.0, 0.0])


def _correction_row(k: int) -> np.ndarray:
    """Subtracts g^(k-1)/2^(2(k-1)) from the running sum kept in the fourth neuron"""
    scale = 2.0 ** (-2 * k + 3)
    return np.array([-scale, 2.0 * scale, -scale, 1.0])


def _interior(k: int) -> np.ndarray:
    A = np.zeros((4, 4))
    A[:3, :3] = [2.0, -4.0, 2.0]
    A[3] = _correction_row(k)
    return A


def square_weights(m: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(alpha, b), (A_2, b), ..., (A_{m-1}, b), (omega_m, 0)"""
    if m < MIN_SQUARE_LEVEL:
        raise ApproximationDomainError(f'square network needs m >= {MIN_SQUARE_LEVEL}, got {m}')
    weights = [(_ALPHA, _BIAS)]
    weights.extend((_interior(k), _BIAS) for k in range(2, m))
    weights.append((_correction_row(m).reshape(1, 4), np.zeros(1)))
    return weights


@log_size
def build_square(m: int) -> NeuralNetwork:
    """
    Strict ReLU network of depth m realizing f_{m-1}, the piecewise linear interpolant
    of x^2 on [0, 1] with nodes k / 2^(m-1).
    Sizes: M = 10 + 15(m - 2), M_1 = 6, interior M_l = 15, M_L = 4.
    """
    return from_weights_strict(square_weights(m), 1)


def square_weight_count(m: int) -> int:
    return 10 + 15 * (m - 2)


def square_error(m: int) -> ErrorCertificate:
    """
    sup |x^2 - R(x)| over [0, 1], evaluated on the grid k / 2^m.
    The realization is linear between nodes of level m-1, so the sup is attained
    on this grid (at the midpoints) and equals 2^(-2m).
    """
    if not MIN_SQUARE_LEVEL <= m <= MAX_SQUARE_LEVEL:
        raise ApproximationDomainError(
            f'square error is checked for {MIN_SQUARE_LEVEL} <= m <= {MAX_SQUARE_LEVEL}, got {m}'
        )
    grid = np.arange(2 ** m + 1, dtype=np.float64) / 2.0 ** m
    values = realize_batch(build_square(m), grid)[:, 0]
    measured = float(np.max(np.abs(grid * grid - values)))
    return ErrorCertificate(
        claimed_bound=2.0 ** (-2 * m),
        measured_error=measured,
        sample_description=f'dyadic grid k/2^{m}, {grid.size} points',
        samples=int(grid.size),
    )


class SquareBuilder(BaseBuilder):
    """Square network of level m"""

    name = 'square'

    def __init__(self, m: int):
        self.m = m

    def _build(self) -> NeuralNetwork:
        return build_square(self.m)

    def certify(self, samples: int = 0, seed: Optional[int] = None) -> ErrorCertificate:
        return square_error(self.m)

    def size_bound(self, report: SizeReport) -> bool:
        interior = report.per_layer_weights[1:-1]
        return (
            report.layers == self.m
            and report.weights == square_weight_count(self.m)
            and report.first_layer_weights == 6
            and report.last_layer_weights == 4
            and all(count == 15 for count in interior)
        )


def square_error_rate(levels=range(3, 13)) -> float:
    """
    Least-squares slope of log2(measured error) against the weight count M over `levels`,
    in bits per weight
    """
    levels = list(levels)
    weights = np.array([square_weight_count(m) for m in levels], dtype=np.float64)
    errors = np.array([square_error(m).measured_error for m in levels])
    slope, _ = np.polyfit(weights, np.log2(errors), 1)
    logger.debug('square error decays at %.4f bits per weight over m=%s', slope, levels)
    return float(slope)
