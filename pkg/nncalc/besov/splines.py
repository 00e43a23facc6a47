"""Sawtooth functions, square interpolants, cardinal B-splines and bump functions"""
import itertools
import logging
from typing import Optional, Tuple, Union

import numpy as np
from scipy import integrate
from scipy.special import binom, factorial

from ..constants import CONVOLUTION_TOL, PARTITION_TOL
from ..errors import ApproximationDomainError, DomainViolation
from ..interface import ErrorCertificate
from ..sampling import make_rng

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]


def _unit_interval(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
        raise DomainViolation('argument must lie in [0, 1]')
    return x


def _like(x, value: np.ndarray) -> Number:
    return float(value) if np.ndim(x) == 0 else value


def _tent(t: np.ndarray) -> np.ndarray:
    return np.minimum(2.0 * t, 2.0 - 2.0 * t)


def sawtooth(m: int, x) -> Number:
    """g^m(x) = g(2^(m-1) x - floor(2^(m-1) x)) with the tent map g(x) = min(2x, 2 - 2x)"""
    if m < 1:
        raise DomainViolation(f'sawtooth order must be at least 1, got {m}')
    values = _unit_interval(x)
    scaled = 2.0 ** (m - 1) * values
    return _like(x, _tent(scaled - np.floor(scaled)))


def sawtooth_recursive(m: int, x) -> Number:
    """g o ... o g, m times"""
    if m < 1:
        raise DomainViolation(f'sawtooth order must be at least 1, got {m}')
    values = _unit_interval(x)
    for _ in range(m):
        values = _tent(values)
    return _like(x, values)


def square_interpolant(m: int, x) -> Number:
    """Piecewise linear interpolant h_m of x^2 with nodes k / 2^m"""
    if m < 0:
        raise DomainViolation(f'interpolation level must be non-negative, got {m}')
    values = _unit_interval(x)
    scale = 2.0 ** m
    k = np.floor(scale * values)
    return _like(x, (2.0 * k + 1.0) / scale * (values - k / scale) + (k / scale) ** 2)


def square_interpolant_telescoped(m: int, x) -> Number:
    """h_m(x) = x - sum_{k=1}^m g^k(x) / 2^(2k)"""
    values = _unit_interval(x)
    total = np.array(values, copy=True)
    for k in range(1, m + 1):
        total = total - np.asarray(sawtooth(k, values)) / 4.0 ** k
    return _like(x, total)


def bspline(r: int, x) -> Number:
    """
    Cardinal B-spline of degree r,
    beta_r(x) = 1/r! sum_{k=0}^{r+1} binom(r+1, k) (-1)^k relu(x - k)^r, supported on (0, r + 1).
    beta_0 is the indicator of (0, 1].
    """
    if r < 0:
        raise DomainViolation(f'spline degree must be non-negative, got {r}')
    values = np.asarray(x, dtype=np.float64)
    if r == 0:
        return _like(x, ((values > 0) & (values <= 1)).astype(np.float64))
    k = np.arange(r + 2)
    coefficients = binom(r + 1, k) * (-1.0) ** k / factorial(r)
    pieces = np.maximum(values[..., None] - k, 0.0) ** r
    out = np.sum(coefficients * pieces, axis=-1)
    return _like(x, np.where((values > 0) & (values < r + 1), out, 0.0))


def bspline_tensor(r: int, d: int, k: int, j, x) -> float:
    """prod_i beta_{r-1}(2^k x_i - j_i), supported on 2^-k ([0, r]^d + j)"""
    if r < 1:
        raise DomainViolation(f'tensor splines need r >= 1, got {r}')
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    j = np.asarray(j, dtype=np.float64).reshape(-1)
    if x.shape[0] != d or j.shape[0] != d:
        raise DomainViolation(f'expected {d} coordinates, got x={x.shape[0]} j={j.shape[0]}')
    return float(np.prod(bspline(r - 1, 2.0 ** k * x - j)))


def bspline_mass(r: int) -> float:
    """Integral of beta_r by adaptive quadrature"""
    value, _ = integrate.quad(
        lambda t: bspline(r, t),
        0.0,
        r + 1.0,
        points=list(range(1, r + 1)) or None,
        epsabs=1e-13,
        epsrel=1e-13,
        limit=200,
    )
    return value


def _convolved(r: int, x: float) -> float:
    # beta_r(x - y) has kinks where x - y is an integer
    breaks = [x - k for k in range(r + 2) if 0.0 < x - k < 1.0]
    value, _ = integrate.quad(
        lambda y: bspline(r, x - y),
        0.0,
        1.0,
        points=breaks or None,
        epsabs=1e-13,
        epsrel=1e-13,
        limit=200,
    )
    return value


def bspline_convolution_check(r: int, grid: int = 241) -> ErrorCertificate:
    """max |beta_(r+1)(x) - (beta_r * chi_[0,1])(x)| on a grid of [-1/2, r + 5/2]"""
    if not 0 <= r <= 6:
        raise DomainViolation(f'convolution check supports 0 <= r <= 6, got {r}')
    xs = np.linspace(-0.5, r + 2.5, grid)
    measured = max(abs(bspline(r + 1, x) - _convolved(r, x)) for x in xs)
    return ErrorCertificate(
        claimed_bound=CONVOLUTION_TOL,
        measured_error=float(measured),
        sample_description=f'{grid} grid points on [-0.5, {r + 2.5}], adaptive quadrature',
        samples=grid,
    )


def contributing_shifts(r: int, k: int, x) -> Tuple[range, ...]:
    """Per coordinate, the shifts j with 2^k x - j in [0, r]"""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    scaled = 2.0 ** k * x
    return tuple(range(int(np.ceil(s)) - r, int(np.floor(s)) + 1) for s in scaled)


def partition_of_unity_check(
    r: int,
    d: int,
    k: int,
    samples: int = 500,
    seed: Optional[int] = 0,
) -> ErrorCertificate:
    """
    sum_j beta_{k,j}(x) = 1 at random x in [0, 1]^d. Shifts next to the contributing
    range must vanish, their values enter the measured error.
    """
    if r < 1:
        raise DomainViolation(f'partition of unity needs r >= 1, got {r}')
    points = make_rng(seed).uniform(0.0, 1.0, size=(samples, d))
    measured = 0.0
    for x in points:
        shifts = contributing_shifts(r, k, x)
        total = sum(bspline_tensor(r, d, k, j, x) for j in itertools.product(*shifts))
        measured = max(measured, abs(total - 1.0))
        for axis, span in enumerate(shifts):
            for outside in (span.start - 1, span.stop):
                j = [s.start for s in shifts]
                j[axis] = outside
                measured = max(measured, abs(bspline_tensor(r, d, k, j, x)))
    return ErrorCertificate(
        claimed_bound=PARTITION_TOL,
        measured_error=float(measured),
        sample_description=f'{samples} uniform points in [0, 1]^{d}, level {k}',
        samples=samples,
        seed=seed,
    )


def smooth_step(r: int, s) -> Number:
    """sigma(s) = 1/r! sum_{j=0}^r binom(r, j) (-1)^j relu(s - j)^r: 0 below 0, 1 above r, sigma' = beta_(r-1)"""
    values = np.asarray(s, dtype=np.float64)
    j = np.arange(r + 1)
    coefficients = binom(r, j) * (-1.0) ** j / factorial(r)
    out = np.sum(coefficients * np.maximum(values[..., None] - j, 0.0) ** r, axis=-1)
    out = np.where(values <= 0, 0.0, np.where(values >= r, 1.0, out))
    return _like(s, out)


def check_bump_params(r: int, delta: float):
    if r < 1:
        raise ApproximationDomainError(f'bump needs r >= 1, got {r}')
    if not 0 < delta < 0.5:
        raise ApproximationDomainError(f'delta must lie in (0, 1/2), got {delta}')


def bump(r: int, d: int, delta: float, x) -> Number:
    """phi(x) = sigma(r (sum_k psi(x_k) - d + 1)), psi(t) = sigma(r t / delta) - sigma(r (t + delta - 1) / delta)"""
    check_bump_params(r, delta)
    values = np.asarray(x, dtype=np.float64)
    if values.shape[-1] != d:
        raise DomainViolation(f'expected {d} coordinates, got shape {values.shape}')
    inner = smooth_step(r, r * values / delta) - smooth_step(r, r * (values + delta - 1.0) / delta)
    out = smooth_step(r, r * (np.sum(inner, axis=-1) - d + 1.0))
    return float(out) if values.ndim == 1 else out


def bump_lp_gap(r: int, d: int, delta: float, p: float = 1.0, resolution: int = 200) -> Tuple[float, float]:
    """
    ||chi_[0,1]^d - phi||_p^p by the midpoint rule on [0, 1]^d, returned with the
    shell volume 1 - (1 - 2 delta)^d that bounds it
    """
    axis = (np.arange(resolution) + 0.5) / resolution
    mesh = np.stack(np.meshgrid(*([axis] * d), indexing='ij'), axis=-1).reshape(-1, d)
    gap = float(np.mean(np.abs(1.0 - bump(r, d, delta, mesh)) ** p))
    return gap, 1.0 - (1.0 - 2.0 * delta) ** d
