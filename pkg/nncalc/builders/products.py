"""Scalar and matrix product networks"""
import functools
import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..calculus import concatenate, parallelize
from ..config import Settings, get_settings
from ..errors import ApproximationDomainError
from ..interface import ErrorCertificate, SizeReport
from ..linalg import matricize, spectral_norm, vectorize
from ..network import (
    Layer,
    NeuralNetwork,
    affine_network,
    from_weights_strict,
    realize,
    realize_batch,
)
from ..sampling import make_rng, max_error, sample_bounded_matrices
from .base import BaseBuilder, log_size
from .square import build_square

logger = logging.getLogger(__name__)

# relu(|x +- y|/(2C)) pieces and their pairwise sums
_HALF_SUMS = np.array([[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]])
_ABS = np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]])
# neurons relu(t - 1) of the two square branches, t <= 1 on [-M, M]^2
_SATURATED = (2, 6)


def _check_positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise ApproximationDomainError(f'{name} must be positive, got {value}')


def scalar_mult_level(eps: float, bound: float) -> int:
    """Smallest square level m >= 2 with max(1, bound)^2 * 2^(-2m) <= eps"""
    C = max(1.0, bound)
    return max(2, math.ceil(0.5 * math.log2(C * C / eps)))


def matmul_level(eps: float, d: int, n: int, l: int, bound: float) -> int:
    """Smallest square level m >= 2 with n sqrt(d l) max(1, bound)^2 * 2^(-2m) <= eps"""
    C = max(1.0, bound)
    return max(2, math.ceil(0.5 * math.log2(n * math.sqrt(d * l) * C * C / eps)))


def _without_saturated(net: NeuralNetwork, index: int, rows: Sequence[int]) -> NeuralNetwork:
    layer = net.layers[index]
    A = np.array(layer.A)
    A[list(rows), :] = 0.0
    layers = list(net.layers)
    layers[index] = Layer(A, layer.b, layer.acts)
    return NeuralNetwork(tuple(layers))


def scalar_mult_network(m: int, C: float) -> NeuralNetwork:
    """
    xy = C^2 ((|x + y|/2C)^2 - (|x - y|/2C)^2) with both squares taken by the level m network.
    Error at most C^2 2^(-2m) on [-C, C]^2.
    """
    absolute = from_weights_strict([(_HALF_SUMS / (2.0 * C), np.zeros(4)), (_ABS, np.zeros(2))], 1)
    square = build_square(m)
    body = parallelize([square, square], shared_input=False)
    net = concatenate(affine_network([[C * C, -C * C]]), concatenate(body, absolute))
    return _without_saturated(net, 1, _SATURATED)


@log_size
def build_scalar_mult(eps: float, bound: float) -> NeuralNetwork:
    """
    Strict ReLU network with |xy - R(x, y)| <= eps on [-bound, bound]^2.
    Sizes: M = 30m - 28, M_1 = M_L = 8, L = m + 1 with m = scalar_mult_level(eps, bound).
    """
    _check_positive(eps=eps, bound=bound)
    if eps >= bound * bound:
        raise ApproximationDomainError(f'eps must be below bound^2 = {bound * bound}, got {eps}')
    m = scalar_mult_level(eps, bound)
    logger.debug('scalar product: eps=%s bound=%s -> m=%s', eps, bound, m)
    return scalar_mult_network(m, max(1.0, bound))


def matmul_error_bound(d: int, n: int, l: int, m: int, left: float, right: float) -> float:
    """n sqrt(d l) left right 2^(-2m)"""
    return n * math.sqrt(d * l) * left * right * 4.0 ** -m


def matmul_network(d: int, n: int, l: int, m: int, left: float, right: float) -> NeuralNetwork:
    """
    (vect A, vect B) -> vect(AB) at square level m.
    A and B enter the scalar networks as A / s and s B with s = sqrt(left / right), so the error
    is at most matmul_error_bound(d, n, l, m, left, right) whenever |A_ij| <= left and |B_jk| <= right.
    """
    _check_positive(left=left, right=right)
    if min(d, n, l) < 1:
        raise ApproximationDomainError(f'matrix dimensions must be positive, got {(d, n, l)}')
    scale = math.sqrt(left / right)
    scalar = scalar_mult_network(m, math.sqrt(left * right))
    count = d * n * l
    select = np.zeros((2 * count, n * (d + l)))
    total = np.zeros((d * l, count))
    t = 0
    for k in range(l):
        for i in range(d):
            for j in range(n):
                select[2 * t, i + d * j] = 1.0 / scale
                select[2 * t + 1, d * n + j + n * k] = scale
                total[i + d * k, t] = 1.0
                t += 1
    body = parallelize([scalar] * count, shared_input=False)
    return concatenate(affine_network(total), concatenate(body, affine_network(select)))


@functools.lru_cache(maxsize=32)
@log_size
def build_matrix_mult(d: int, n: int, l: int, eps: float, bound: float) -> NeuralNetwork:
    """
    Network mapping (vect A, vect B) to vect(AB) for A (d x n), B (n x l),
    with ||AB - mat(R)||_2 <= eps whenever ||A||_2, ||B||_2 <= bound.
    One scalar product network per (i, j, k), their outputs summed over j.
    """
    _check_positive(eps=eps, bound=bound)
    m = matmul_level(eps, d, n, l, bound)
    logger.debug('matrix product %sx%s by %sx%s: eps=%s bound=%s -> m=%s', d, n, n, l, eps, bound, m)
    C = max(1.0, bound)
    return matmul_network(d, n, l, m, C, C)


def scalar_mult_error(
    eps: float,
    bound: float,
    grid: int = 201,
) -> ErrorCertificate:
    """max |xy - R(x, y)| over a grid x grid lattice of [-bound, bound]^2"""
    net = build_scalar_mult(eps, bound)
    axis = np.linspace(-bound, bound, grid)
    X, Y = np.meshgrid(axis, axis, indexing='ij')
    points = np.column_stack([X.ravel(), Y.ravel()])
    values = realize_batch(net, points)[:, 0]
    measured = float(np.max(np.abs(points[:, 0] * points[:, 1] - values)))
    return ErrorCertificate(
        claimed_bound=eps,
        measured_error=measured,
        sample_description=f'{grid}x{grid} lattice on [-{bound}, {bound}]^2',
        samples=grid * grid,
    )


def matmul_error(
    d: int,
    n: int,
    l: int,
    eps: float,
    bound: float,
    samples: int = 50,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
) -> ErrorCertificate:
    """max ||AB - mat(R(vect A, vect B))||_2 over rejection-sampled pairs with norms <= bound"""
    settings = get_settings(settings)
    net = build_matrix_mult(d, n, l, eps, bound)
    rng = make_rng(seed)
    lefts = sample_bounded_matrices(rng, (d, n), bound, samples)
    rights = sample_bounded_matrices(rng, (n, l), bound, samples)

    def _error(pair) -> float:
        A, B = pair
        out = realize(net, np.concatenate([vectorize(A), vectorize(B)]))
        return spectral_norm(A @ B - matricize(out, d, l))

    measured = max_error(_error, zip(lefts, rights), settings.workers)
    return ErrorCertificate(
        claimed_bound=eps,
        measured_error=measured,
        sample_description=f'{samples} rejection-sampled pairs ({d}x{n}, {n}x{l}) with spectral norm <= {bound}',
        samples=samples,
        seed=seed,
    )


class ScalarMultBuilder(BaseBuilder):
    """Scalar product network on [-bound, bound]^2"""

    name = 'mult'

    def __init__(self, eps: float, bound: float, grid: int = 201):
        self.eps = eps
        self.bound = bound
        self.grid = grid

    @property
    def level(self) -> int:
        return scalar_mult_level(self.eps, self.bound)

    def _build(self) -> NeuralNetwork:
        return build_scalar_mult(self.eps, self.bound)

    def certify(self, samples: int = 0, seed: Optional[int] = None) -> ErrorCertificate:
        return scalar_mult_error(self.eps, self.bound, samples or self.grid)

    def size_bound(self, report: SizeReport) -> bool:
        m = self.level
        return (
            report.weights == 30 * m - 28
            and report.layers == m + 1
            and report.first_layer_weights == 8
            and report.last_layer_weights == 8
        )


class MatrixMultBuilder(BaseBuilder):
    """Matrix product network for d x n by n x l matrices"""

    name = 'matmul'

    def __init__(self, d: int, n: int, l: int, eps: float, bound: float, settings: Optional[Settings] = None):
        self.d = d
        self.n = n
        self.l = l
        self.eps = eps
        self.bound = bound
        self.settings = settings

    @property
    def level(self) -> int:
        return matmul_level(self.eps, self.d, self.n, self.l, self.bound)

    def _build(self) -> NeuralNetwork:
        return build_matrix_mult(self.d, self.n, self.l, self.eps, self.bound)

    def certify(self, samples: int = 0, seed: Optional[int] = None) -> ErrorCertificate:
        return matmul_error(self.d, self.n, self.l, self.eps, self.bound, samples or 50, seed, self.settings)

    def size_bound(self, report: SizeReport) -> bool:
        m = self.level
        count = self.d * self.n * self.l
        return (
            report.weights <= count * (30 * m - 28)
            and report.layers == m + 1
            and report.first_layer_weights <= 8 * count
            and report.last_layer_weights <= 8 * count
        )
