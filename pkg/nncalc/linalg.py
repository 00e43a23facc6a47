"""Dense linear algebra helpers"""
import logging
from typing import Optional

import numpy as np
import scipy.linalg

from .constants import POWER_ITERATION_MAX_ITER, POWER_ITERATION_TOL
from .errors import DimensionMismatch, SpectralNormError

logger = logging.getLogger(__name__)


def as_matrix(value) -> np.ndarray:
    """2-D float64 copy of `value`"""
    matrix = np.array(value, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2:
        raise DimensionMismatch(f'expected a matrix, got an array with shape {matrix.shape}')
    return matrix


def norm0(A) -> int:
    """Number of entries different from zero, -0.0 counts as zero"""
    return int(np.count_nonzero(np.asarray(A)))


def spectral_norm(A) -> float:
    """
    ||A||_2.
    Symmetric matrices (exact check) use the largest |eigenvalue|, others the
    square root of the largest eigenvalue of the smaller Gram matrix.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.size == 0:
        return 0.0
    if A.ndim == 1:
        A = A.reshape(1, -1)
    try:
        if A.shape[0] == A.shape[1] and np.array_equal(A, A.T):
            return float(np.max(np.abs(scipy.linalg.eigvalsh(A))))
        gram = A.T @ A if A.shape[0] >= A.shape[1] else A @ A.T
        top = scipy.linalg.eigvalsh(gram)[-1]
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SpectralNormError(f'eigenvalue solver failed on a {A.shape} matrix: {exc}') from exc
    return float(np.sqrt(max(top, 0.0)))


def power_iteration_norm(
    A,
    tol: float = POWER_ITERATION_TOL,
    max_iter: int = POWER_ITERATION_MAX_ITER,
    seed: Optional[int] = 0,
) -> float:
    """
    ||A||_2 by power iteration on the Gram operator x -> A^T A x
    :param A: matrix
    :param tol: relative change of the Rayleigh quotient that stops the iteration
    :param max_iter: iteration cap, SpectralNormError when reached
    :param seed: seed of the random start vector
    :return:
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.size == 0 or not np.any(A):
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.normal(size=A.shape[1])
    x /= np.linalg.norm(x)
    lam = 0.0
    for iteration in range(max_iter):
        y = A.T @ (A @ x)
        y_norm = np.linalg.norm(y)
        if y_norm == 0:
            # start vector in the null space
            x = rng.normal(size=A.shape[1])
            x /= np.linalg.norm(x)
            continue
        lam_new = float(x @ y)
        x = y / y_norm
        if abs(lam_new - lam) <= tol * abs(lam_new):
            logger.debug('power iteration converged after %s steps', iteration + 1)
            return float(np.sqrt(lam_new))
        lam = lam_new
    raise SpectralNormError(f'power iteration did not converge in {max_iter} steps')


def vectorize(A) -> np.ndarray:
    """Column-major flattening (a11, ..., ak1, a12, ..., akl)"""
    return as_matrix(A).reshape(-1, order='F')


def matricize(v, k: int, l: int) -> np.ndarray:
    """Inverse of `vectorize` for a k x l matrix"""
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.shape[0] != k * l:
        raise DimensionMismatch(f'cannot reshape a vector of length {v.shape[0]} into {k}x{l}')
    return v.reshape((k, l), order='F')


def neumann_sum(A, count: int) -> np.ndarray:
    """sum_{k=0}^{count-1} A^k"""
    A = as_matrix(A)
    total = np.zeros_like(A)
    power = np.eye(A.shape[0])
    for _ in range(count):
        total += power
        power = power @ A
    return total


def neumann_product(A, big_n: int) -> np.ndarray:
    """prod_{k=0}^{big_n} (I + A^(2^k)), equal to the partial sum with 2^(big_n+1) terms"""
    A = as_matrix(A)
    identity = np.eye(A.shape[0])
    product = identity.copy()
    power = A.copy()
    for _ in range(big_n + 1):
        product = (identity + power) @ product
        power = power @ power
    return product


def neumann_tail_bound(norm: float, big_n: int) -> float:
    """norm^(N+1) / (1 - norm), bound on ||(I - A)^-1 - sum_{k<=N} A^k||_2"""
    if not 0 <= norm < 1:
        raise ValueError(f'Neumann tail bound needs 0 <= ||A|| < 1, got {norm}')
    return norm ** (big_n + 1) / (1.0 - norm)
