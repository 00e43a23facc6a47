"""Neumann series networks and the matrix inversion network

The partial sum S_N(A) = sum_{k < 2^N} A^k = prod_{k < N} (I + A^(2^k)) is built by
repeated squaring. To keep every intermediate matrix small, the chain carries
A_(2^k) ~ (A/2)^(2^k) and sigma_k ~ 3 * 2^-(2^k + 1) * S_k and the closing block
multiplies the last product by C(N) = 2^(2^N + 1) / 3.

All product networks of one chain run at the same square level m. Each product is scaled
to norm bounds on its two factors, see `chain_bounds`, and m is the smallest level whose
worst case error stays within the requested accuracy.
"""
import logging
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..calculus import concatenate, identity_network, parallelize, sparse_concatenate
from ..config import Settings, get_settings
from ..constants import MAX_CONTRACTION, MAX_NEUMANN_EPS, MAX_SQUARE_LEVEL, MIN_SQUARE_LEVEL
from ..errors import ApproximationDomainError, DimensionCapExceeded, ScheduleError
from ..interface import ErrorCertificate, InversionPlan, InversionSchedule, SizeReport
from ..linalg import matricize, neumann_sum, spectral_norm, vectorize
from ..network import NeuralNetwork, affine_network, realize
from ..sampling import make_rng, max_error, sample_contractions
from .base import BaseBuilder, log_size
from .products import matmul_error_bound, matmul_network

logger = logging.getLogger(__name__)


class StateBound(NamedTuple):
    """Bounds on the chain state (A_(2^k), sigma_k) of the network for ||A||_2 <= radius"""

    power: float
    sigma: float
    power_error: float
    sigma_error: float


def normalizer(big_n: int) -> float:
    """C(N) = 2^(2^N + 1) / 3"""
    return 2.0 ** (2 ** big_n + 1) / 3.0


def _check_eps(eps: float):
    if not 0 < eps < MAX_NEUMANN_EPS:
        raise ApproximationDomainError(f'eps must lie in (0, {MAX_NEUMANN_EPS}), got {eps}')


def _check_doublings(big_n: int, settings: Settings):
    if big_n < 1:
        raise ApproximationDomainError(f'the number of doublings must be at least 1, got {big_n}')
    if big_n > settings.max_doublings:
        raise ScheduleError(
            f'schedule failure for extreme conditioning: N={big_n} doublings exceed the limit of '
            f'{settings.max_doublings}, the factor C(N) = 2^{2 ** big_n + 1}/3 is beyond double precision'
        )


def neumann_depth(eps: float, delta: float) -> int:
    """N(eps, delta) = ceil(log2(max(log2((1 - delta) eps) / log2(delta), 2))), 1 for delta = 0"""
    if delta == 0:
        return 1
    ratio = math.log2((1.0 - delta) * eps) / math.log2(delta)
    return math.ceil(math.log2(max(ratio, 2.0)))


def inversion_schedule(eps: float, alpha: float, delta: float, d: int = 1) -> InversionSchedule:
    """
    N(eps/alpha, delta) and n(eps/alpha, delta) = 2^(N-1) + 1 + floor(log2(d^2 alpha / eps) / 2).
    The floor term is clamped at zero so that n >= N.
    """
    _check_eps(eps)
    if not alpha > 0:
        raise ApproximationDomainError(f'alpha must be positive, got {alpha}')
    if not 0 <= delta < 1:
        raise ApproximationDomainError(f'delta must lie in [0, 1), got {delta}')
    if delta > MAX_CONTRACTION:
        raise ApproximationDomainError(f'delta={delta!r} is too close to 1 for a finite schedule')
    big_n = neumann_depth(eps / alpha, delta)
    little_n = 2 ** (big_n - 1) + 1 + max(0, math.floor(0.5 * math.log2(d * d * alpha / eps)))
    return InversionSchedule(eps=eps, alpha=alpha, delta=delta, big_n=big_n, little_n=little_n)


def truncation_error(alpha: float, delta: float, big_n: int) -> float:
    """alpha delta^(2^N) / (1 - delta), the distance of alpha S_N(I - alpha B) to B^-1"""
    return alpha * delta ** (2 ** big_n) / (1.0 - delta)


def theorem_weight_bound(d: int, big_n: int, little_n: int) -> int:
    """n (60 d^3 (N - 1) + 2 d^2) + d^3 (12 N - 2) + 4 d^2 + 2 d"""
    return little_n * (60 * d ** 3 * (big_n - 1) + 2 * d ** 2) + d ** 3 * (12 * big_n - 2) + 4 * d ** 2 + 2 * d


def proof_weight_bound(d: int, big_n: int, little_n: int) -> int:
    """The same bound with d^3 (12 N - 10), as stated for the Neumann network before the final affine maps"""
    return little_n * (60 * d ** 3 * (big_n - 1) + 2 * d ** 2) + d ** 3 * (12 * big_n - 10) + 4 * d ** 2 + 2 * d


def theorem_layer_bound(big_n: int, little_n: int) -> int:
    """N (n + 2) - 2"""
    return big_n * (little_n + 2) - 2


def neumann_layers(big_n: int, level: int) -> int:
    """Depth of the Neumann network: 1 for N = 1, otherwise N (m + 1)"""
    return 1 if big_n == 1 else big_n * (level + 1)


def _sigma_norm(k: int, radius: float) -> float:
    # ||3 * 2^-(2^k + 1) S_k(A)||_2 for ||A||_2 <= radius
    return 3.0 * 2.0 ** -(2 ** k + 1) * sum(radius ** j for j in range(2 ** k))


def chain_bounds(d: int, states: int, level: int, radius: float = 1.0) -> List[StateBound]:
    """
    Worst case bounds on the states 1..states of the power chain at square level m.
    With e(p, q) = d^2 p q 2^(-2m), P_k = (radius/2)^(2^k) and c_k = 2^-(2^k):
      a_(k+1) <= e(|A_k|, |A_k|) + a_k (|A_k| + P_k)
      b_(k+1) <= e(|A_k| + c_k, |sigma_k|) + a_k |sigma_k| + (P_k + c_k) b_k
    where |.| are the bounds on the network state and a, b its errors.
    """
    P = (radius / 2.0) ** 2
    a = matmul_error_bound(d, d, d, level, radius / 2.0, radius / 2.0)
    bounds = [StateBound(power=P + a, sigma=_sigma_norm(1, radius), power_error=a, sigma_error=0.0)]
    for k in range(1, states):
        state = bounds[-1]
        P = (radius / 2.0) ** (2 ** k)
        c = 2.0 ** -(2 ** k)
        a = matmul_error_bound(d, d, d, level, state.power, state.power) + state.power_error * (state.power + P)
        b = (
            matmul_error_bound(d, d, d, level, state.power + c, state.sigma)
            + state.power_error * state.sigma
            + (P + c) * state.sigma_error
        )
        bounds.append(
            StateBound(
                power=(radius / 2.0) ** (2 ** (k + 1)) + a,
                sigma=_sigma_norm(k + 1, radius) + b,
                power_error=a,
                sigma_error=b,
            )
        )
    return bounds


def neumann_error_bound(d: int, big_n: int, level: int, radius: float = 1.0) -> float:
    """Worst case ||S_N(A) - mat(R(vect A))||_2 over ||A||_2 <= radius, 0 for N = 1"""
    if big_n == 1:
        return 0.0
    state = chain_bounds(d, big_n - 1, level, radius)[-1]
    k = big_n - 1
    c = 2.0 ** -(2 ** k)
    P = (radius / 2.0) ** (2 ** k)
    return normalizer(big_n) * (
        matmul_error_bound(d, d, d, level, state.power + c, state.sigma)
        + state.power_error * state.sigma
        + (P + c) * state.sigma_error
    )


def _smallest_level(bound, eps: float, what: str) -> int:
    for level in range(MIN_SQUARE_LEVEL, MAX_SQUARE_LEVEL + 1):
        if bound(level) <= eps:
            return level
    raise ScheduleError(f'{what}: no square level up to {MAX_SQUARE_LEVEL} reaches accuracy {eps}')


def neumann_level(d: int, big_n: int, eps: float, radius: float = 1.0) -> int:
    """Smallest square level m with neumann_error_bound(d, N, m, radius) <= eps"""
    return _smallest_level(
        lambda level: neumann_error_bound(d, big_n, level, radius),
        eps,
        f'Neumann network d={d} N={big_n}',
    )


def power_chain_level(d: int, states: int, eps: float) -> int:
    """Smallest square level m with ||A_(2^N) - (A/2)^(2^N)||_2 <= eps for ||A||_2 <= 1"""
    return _smallest_level(
        lambda level: chain_bounds(d, states, level)[-1].power_error,
        eps,
        f'power chain d={d} N={states}',
    )


def _block_identity(d: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.eye(d * d), vectorize(np.eye(d))


@log_size
def build_neumann_first_block(d: int, level: int, radius: float = 1.0) -> NeuralNetwork:
    """vect A -> (vect A_2, vect sigma_1) with A_2 ~ (A/2)^2 and sigma_1 = 3/8 (I + A)"""
    eye, vec_i = _block_identity(d)
    product = matmul_network(d, d, d, level, radius / 2.0, radius / 2.0)
    power = concatenate(product, affine_network(0.5 * np.vstack([eye, eye])))
    carry = concatenate(affine_network(0.375 * eye, 0.375 * vec_i), identity_network(d * d, product.depth))
    return parallelize([power, carry], shared_input=True)


@log_size
def build_neumann_doubling_block(d: int, k: int, level: int, state: StateBound) -> NeuralNetwork:
    """(A_(2^k), sigma_k) -> (A_(2^k)^2, (A_(2^k) + 2^-(2^k) I) sigma_k), products scaled to `state`"""
    eye, vec_i = _block_identity(d)
    zero = np.zeros_like(eye)
    shift = 2.0 ** -(2 ** k)
    square = matmul_network(d, d, d, level, state.power, state.power)
    carry = matmul_network(d, d, d, level, state.power + shift, state.sigma)
    select = np.block([[eye, zero], [eye, zero], [eye, zero], [zero, eye]])
    bias = np.concatenate([np.zeros(2 * d * d), shift * vec_i, np.zeros(d * d)])
    return concatenate(parallelize([square, carry], shared_input=False), affine_network(select, bias))


@log_size
def build_neumann_closing_block(d: int, big_n: int, level: int, state: StateBound) -> NeuralNetwork:
    """(A_(2^(N-1)), sigma_(N-1)) -> C(N) (A_(2^(N-1)) + 2^-(2^(N-1)) I) sigma_(N-1), which approximates S_N"""
    eye, vec_i = _block_identity(d)
    shift = 2.0 ** -(2 ** (big_n - 1))
    product = matmul_network(d, d, d, level, state.power + shift, state.sigma)
    bias = affine_network(np.eye(2 * d * d), np.concatenate([shift * vec_i, np.zeros(d * d)]))
    return concatenate(affine_network(normalizer(big_n) * eye), concatenate(product, bias))


def build_neumann_power_chain(d: int, big_n: int, level: int, radius: float = 1.0) -> NeuralNetwork:
    """
    vect A -> (vect A_(2^N), vect sigma_N), the first block followed by N - 1 doubling blocks,
    every product at square level m. Depth N (m + 1).
    """
    if big_n < 1:
        raise ApproximationDomainError(f'the power chain needs N >= 1, got {big_n}')
    bounds = chain_bounds(d, big_n, level, radius)
    chain = build_neumann_first_block(d, level, radius)
    for k in range(1, big_n):
        chain = sparse_concatenate(build_neumann_doubling_block(d, k, level, bounds[k - 1]), chain)
    return chain


def _neumann_network(d: int, big_n: int, level: int, radius: float) -> NeuralNetwork:
    eye, vec_i = _block_identity(d)
    if big_n == 1:
        return affine_network(eye, vec_i)
    state = chain_bounds(d, big_n - 1, level, radius)[-1]
    return sparse_concatenate(
        build_neumann_closing_block(d, big_n, level, state),
        build_neumann_power_chain(d, big_n - 1, level, radius),
    )


@log_size
def build_neumann_partial(d: int, big_n: int, eps: float, settings: Optional[Settings] = None) -> NeuralNetwork:
    """
    Network with ||sum_{k < 2^N} A^k - mat(R(vect A))||_2 <= eps for every ||A||_2 <= 1
    :param d: matrix dimension
    :param big_n: number of doublings N, the sum has 2^N terms
    :param eps: accuracy in (0, 1/4)
    :param settings: limits, read from the environment by default
    :return:
    """
    settings = get_settings(settings)
    _check_eps(eps)
    _check_doublings(big_n, settings)
    level = neumann_level(d, big_n, eps) if big_n > 1 else 0
    logger.debug('Neumann network d=%s N=%s eps=%s: square level %s', d, big_n, eps, level)
    return _neumann_network(d, big_n, level, 1.0)


def inversion_plan(
    d: int,
    eps: float,
    alpha: float,
    delta: float,
    settings: Optional[Settings] = None,
) -> InversionPlan:
    """
    Build parameters of the inversion network.
    The series is truncated after 2^N terms with N from the schedule. The network gets the rest
    of the budget, (eps - truncation_error(alpha, delta, N)) / alpha, and runs at the smallest
    square level that certifies it for ||A||_2 <= delta.
    Raises ScheduleError when nothing is left for the network or the build exceeds the configured limits.
    """
    settings = get_settings(settings)
    schedule = inversion_schedule(eps, alpha, delta, d)
    if d > settings.max_dim:
        raise DimensionCapExceeded(
            f'd={d} exceeds the inversion cap of {settings.max_dim}, raise it with NNCALC_MAX_DIM'
        )
    big_n = schedule.big_n
    _check_doublings(big_n, settings)
    truncation = truncation_error(alpha, delta, big_n)
    network_eps = (eps - truncation) / alpha
    if not network_eps > 0:
        raise ScheduleError(
            f'schedule failure: the truncated series alone is {truncation} away from B^-1, '
            f'nothing is left of eps={eps} for the network'
        )
    level = neumann_level(d, big_n, network_eps, delta) if big_n > 1 else 0
    plan = InversionPlan(
        d=d,
        schedule=schedule,
        truncation=truncation,
        network_eps=network_eps,
        level=level,
        network_error=alpha * neumann_error_bound(d, big_n, level, delta),
        weight_bound=theorem_weight_bound(d, big_n, schedule.little_n),
        layer_bound=theorem_layer_bound(big_n, schedule.little_n),
        predicted_layers=neumann_layers(big_n, level),
    )
    if level > schedule.little_n:
        logger.warning(
            'inversion d=%s eps=%s: square level %s exceeds n=%s, the network is outside the size bounds',
            d,
            eps,
            level,
            schedule.little_n,
        )
    weight_cap = theorem_weight_bound(d, big_n, max(level, schedule.little_n))
    if weight_cap > settings.max_weights:
        raise ScheduleError(
            f'schedule failure for extreme conditioning: up to {weight_cap} weights predicted, '
            f'limit is {settings.max_weights}'
        )
    logger.debug('inversion plan %s', plan)
    return plan


@log_size
def build_inversion(
    d: int,
    eps: float,
    alpha: float,
    delta: float,
    settings: Optional[Settings] = None,
) -> NeuralNetwork:
    """
    Network with ||B^-1 - mat(R(vect B))||_2 <= eps for every B with ||I - alpha B||_2 <= delta.
    vect B -> vect(I - alpha B) -> Neumann network -> alpha * (.)
    """
    plan = inversion_plan(d, eps, alpha, delta, settings)
    eye, vec_i = _block_identity(d)
    partial = _neumann_network(d, plan.schedule.big_n, plan.level, delta)
    return concatenate(affine_network(alpha * eye), concatenate(partial, affine_network(-alpha * eye, vec_i)))


def neumann_error(
    d: int,
    big_n: int,
    eps: float,
    samples: int = 20,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
) -> ErrorCertificate:
    """max ||S_N(A) - mat(R(vect A))||_2 over A = 0 and random A with ||A||_2 <= 1"""
    settings = get_settings(settings)
    net = build_neumann_partial(d, big_n, eps, settings)
    matrices = [np.zeros((d, d))] + sample_contractions(make_rng(seed), d, 1.0, samples)
    terms = 2 ** big_n

    def _error(A: np.ndarray) -> float:
        return spectral_norm(neumann_sum(A, terms) - matricize(realize(net, vectorize(A)), d, d))

    return ErrorCertificate(
        claimed_bound=eps,
        measured_error=max_error(_error, matrices, settings.workers),
        sample_description=f'zero matrix and {samples} random {d}x{d} matrices with spectral norm <= 1',
        samples=len(matrices),
        seed=seed,
    )


def power_chain_error(
    d: int,
    big_n: int,
    eps: float,
    samples: int = 20,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
) -> Tuple[ErrorCertificate, ErrorCertificate]:
    """
    Certificates for the tapped power chain outputs:
    ||A_(2^N) - (A/2)^(2^N)||_2 <= eps and ||A_(2^N)||_2 <= 1/2
    """
    settings = get_settings(settings)
    chain = build_neumann_power_chain(d, big_n, power_chain_level(d, big_n, eps))
    matrices = sample_contractions(make_rng(seed), d, 1.0, samples)
    q = d * d

    def _power(A: np.ndarray) -> np.ndarray:
        return matricize(realize(chain, vectorize(A))[:q], d, d)

    def _proximity(A: np.ndarray) -> float:
        return spectral_norm(_power(A) - np.linalg.matrix_power(A / 2.0, 2 ** big_n))

    def _size(A: np.ndarray) -> float:
        return spectral_norm(_power(A))

    description = f'{samples} random {d}x{d} matrices with spectral norm <= 1'
    proximity = ErrorCertificate(
        claimed_bound=eps,
        measured_error=max_error(_proximity, matrices, settings.workers),
        sample_description=description,
        samples=samples,
        seed=seed,
    )
    size = ErrorCertificate(
        claimed_bound=0.5,
        measured_error=max_error(_size, matrices, settings.workers),
        sample_description=description,
        samples=samples,
        seed=seed,
    )
    return proximity, size


def _contraction_factor(B: np.ndarray, alpha: float) -> float:
    return spectral_norm(np.eye(B.shape[0]) - alpha * B)


def sample_invertible(rng: np.random.Generator, d: int, alpha: float, delta: float, count: int) -> List[np.ndarray]:
    """Random B = (I - A) / alpha with ||A||_2 <= delta, so ||I - alpha B||_2 <= delta"""
    return [(np.eye(d) - A) / alpha for A in sample_contractions(rng, d, delta, count)]


def inversion_error(
    d: int,
    eps: float,
    alpha: float,
    delta: float,
    samples: int = 20,
    seed: Optional[int] = 0,
    matrices: Optional[Sequence[np.ndarray]] = None,
    settings: Optional[Settings] = None,
) -> ErrorCertificate:
    """
    max ||B^-1 - mat(R(vect B))||_2 over `matrices`, or over random members of the
    admissible set when no matrices are given
    """
    settings = get_settings(settings)
    net = build_inversion(d, eps, alpha, delta, settings)
    if matrices is None:
        matrices = sample_invertible(make_rng(seed), d, alpha, delta, samples)
        description = f'{samples} random {d}x{d} matrices with ||I - {alpha} B||_2 <= {delta}'
    else:
        matrices = [np.asarray(B, dtype=np.float64) for B in matrices]
        for B in matrices:
            if B.shape != (d, d):
                raise ApproximationDomainError(f'expected {d}x{d} matrices, got {B.shape}')
            factor = _contraction_factor(B, alpha)
            if factor > delta + 1e-12:
                raise ApproximationDomainError(f'||I - alpha B||_2 = {factor} exceeds delta = {delta}')
        description = f'{len(matrices)} given {d}x{d} matrices'
        seed = None

    def _error(B: np.ndarray) -> float:
        return spectral_norm(scipy.linalg.inv(B) - matricize(realize(net, vectorize(B)), d, d))

    return ErrorCertificate(
        claimed_bound=eps,
        measured_error=max_error(_error, matrices, settings.workers),
        sample_description=description,
        samples=len(matrices),
        seed=seed,
    )


class NeumannBuilder(BaseBuilder):
    """Neumann partial sum network with 2^N terms"""

    name = 'neumann'

    def __init__(self, d: int, big_n: int, eps: float, settings: Optional[Settings] = None):
        self.d = d
        self.big_n = big_n
        self.eps = eps
        self.settings = settings

    @property
    def level(self) -> int:
        return neumann_level(self.d, self.big_n, self.eps) if self.big_n > 1 else 0

    def _build(self) -> NeuralNetwork:
        return build_neumann_partial(self.d, self.big_n, self.eps, self.settings)

    def certify(self, samples: int = 0, seed: Optional[int] = None) -> ErrorCertificate:
        return neumann_error(self.d, self.big_n, self.eps, samples or 20, seed, self.settings)

    def size_bound(self, report: SizeReport) -> bool:
        level = self.level
        if self.big_n == 1:
            return report.layers == 1
        return (
            report.layers == neumann_layers(self.big_n, level)
            and report.weights <= proof_weight_bound(self.d, self.big_n, level)
        )


class InversionBuilder(BaseBuilder):
    """Matrix inversion network on {B : ||I - alpha B||_2 <= delta}"""

    name = 'invert'

    def __init__(self, d: int, eps: float, alpha: float, delta: float, settings: Optional[Settings] = None):
        self.d = d
        self.eps = eps
        self.alpha = alpha
        self.delta = delta
        self.settings = settings

    @property
    def plan(self) -> InversionPlan:
        return inversion_plan(self.d, self.eps, self.alpha, self.delta, self.settings)

    def _build(self) -> NeuralNetwork:
        return build_inversion(self.d, self.eps, self.alpha, self.delta, self.settings)

    def certify(self, samples: int = 0, seed: Optional[int] = None) -> ErrorCertificate:
        return inversion_error(self.d, self.eps, self.alpha, self.delta, samples or 20, seed, settings=self.settings)

    def size_bound(self, report: SizeReport) -> bool:
        plan = self.plan
        schedule = plan.schedule
        return (
            report.weights <= theorem_weight_bound(self.d, schedule.big_n, schedule.little_n)
            and report.layers <= theorem_layer_bound(schedule.big_n, schedule.little_n)
            and report.layers == plan.predicted_layers
        )
