"""Approximation class quasi-norms, sparse best approximation and the triangle inequality counterexample"""
import contextlib
import csv
import itertools
import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from ..errors import ApproximationDomainError, ErrorSequenceFormatError
from ..interface import (
    QuasiNormParams,
    QuasiNormReport,
    SparseApproxInstance,
    TailPolicy,
    TriangleViolationReport,
)

logger = logging.getLogger(__name__)


@contextlib.contextmanager
def _overflow_as_domain_error(params: QuasiNormParams):
    try:
        with np.errstate(over='raise'):
            yield
    except (FloatingPointError, OverflowError) as error:
        raise ApproximationDomainError(
            f'quasi-norm with alpha={params.alpha}, q={params.q} overflows double precision'
        ) from error


def _weighted_terms(errors: Sequence[float], params: QuasiNormParams) -> np.ndarray:
    values = np.asarray(errors, dtype=np.float64)
    if values.ndim != 1:
        raise ApproximationDomainError('errors must be a flat sequence')
    if np.any(values < 0) or np.any(np.isnan(values)):
        raise ApproximationDomainError('approximation errors must be non-negative')
    n = np.arange(1, values.size + 1, dtype=np.float64)
    with _overflow_as_domain_error(params):
        return n ** params.alpha * values


def approximation_quasinorm(errors: Sequence[float], params: QuasiNormParams) -> float:
    """
    (sum_{n>=1} (n^alpha E_(n-1))^q / n)^(1/q), sup_n n^alpha E_(n-1) for q = inf,
    where errors[n - 1] = E(f, Sigma_(n-1)) and missing entries count as zero
    """
    terms = _weighted_terms(errors, params)
    if terms.size == 0:
        return 0.0
    if math.isinf(params.q):
        return float(np.max(terms))
    n = np.arange(1, terms.size + 1, dtype=np.float64)
    with _overflow_as_domain_error(params):
        return float(np.sum(terms ** params.q / n) ** (1.0 / params.q))


def quasinorm_report(
    errors: Sequence[float],
    params: QuasiNormParams,
    tail: TailPolicy = TailPolicy.zero,
) -> QuasiNormReport:
    """
    Quasi-norm of a truncated error sequence labelled with its tail policy.
    With an unknown tail the value is a lower bound and the last weighted term
    indicates how much the truncation may hide.
    """
    terms = _weighted_terms(errors, params)
    last = 0.0
    if terms.size:
        with _overflow_as_domain_error(params):
            last = float(terms[-1]) if math.isinf(params.q) else float(terms[-1] ** params.q / terms.size)
    return QuasiNormReport(
        value=approximation_quasinorm(errors, params),
        alpha=params.alpha,
        q=params.q,
        tail=tail,
        terms=int(terms.size),
        last_term=last,
        exact=tail == TailPolicy.zero,
    )


def _lp(values: np.ndarray, p: float) -> float:
    if values.size == 0:
        return 0.0
    return float(np.sum(np.abs(values) ** p) ** (1.0 / p))


def sparse_best_approx_error(inst: SparseApproxInstance, n: int) -> float:
    """E(x, Sigma_n)_p, the l^p quasi-norm of the d - n entries smallest in magnitude"""
    if n < 0:
        raise ApproximationDomainError(f'sparsity must be non-negative, got {n}')
    magnitudes = np.sort(np.abs(np.asarray(inst.x)))
    return _lp(magnitudes[: max(inst.d - n, 0)], inst.p)


def sparse_best_approx_brute(inst: SparseApproxInstance, n: int) -> float:
    """E(x, Sigma_n)_p by trying every support of size min(n, d)"""
    x = np.asarray(inst.x)
    size = min(n, inst.d)
    best = math.inf
    for support in itertools.combinations(range(inst.d), size):
        residual = np.delete(x, list(support))
        best = min(best, _lp(residual, inst.p))
    return best


def sparse_error_sequence(x: Sequence[float], p: float, length: Optional[int] = None) -> List[float]:
    """E(x, Sigma_(n-1))_p for n = 1, ..., length (default d + 1)"""
    inst = SparseApproxInstance(x=x, p=p)
    length = inst.d + 1 if length is None else length
    return [sparse_best_approx_error(inst, n - 1) for n in range(1, length + 1)]


def violation_threshold_beta(q: float) -> float:
    """beta(q) = (1 + log2(2^q - 1)) / q"""
    return (1.0 + math.log2(2.0 ** q - 1.0)) / q


def violation_threshold_r(alpha: float, q: float) -> Optional[float]:
    """r(alpha, q) = q / log2(2^q - 2^(alpha q - 1)), defined for alpha < beta(q)"""
    base = 2.0 ** q - 2.0 ** (alpha * q - 1.0)
    if base <= 1.0:
        return None
    return q / math.log2(base)


def violation_predicted(p: float, q: float, alpha: float) -> bool:
    """Whether ||e1 + e2|| > ||e1|| + ||e2|| = 2 is expected for these parameters"""
    if math.isinf(q):
        return max(alpha, 1.0 / p) > 1.0
    if alpha >= violation_threshold_beta(q):
        return True
    return p < violation_threshold_r(alpha, q)


def triangle_violation_demo(p: float, q: float, alpha: float) -> TriangleViolationReport:
    """
    Compare ||e1|| + ||e2|| with ||e1 + e2|| in the approximation class of the sparse
    vectors of R^2 under l^p. The unit vectors have norm 1 each, their sum has norm
    (2^(q/p) + 2^(alpha q - 1))^(1/q).
    """
    params = QuasiNormParams(alpha=alpha, q=q)
    if not p > 0:
        raise ApproximationDomainError(f'p must be positive, got {p}')
    norms = [
        approximation_quasinorm(sparse_error_sequence(x, p), params)
        for x in ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0))
    ]
    gap = norms[2] - (norms[0] + norms[1])
    finite = not math.isinf(q)
    report = TriangleViolationReport(
        p=p,
        q=q,
        alpha=alpha,
        norm_e1=norms[0],
        norm_e2=norms[1],
        norm_sum=norms[2],
        gap=gap,
        violated=gap > 1e-12,
        predicted=violation_predicted(p, q, alpha),
        beta_q=violation_threshold_beta(q) if finite else None,
        r_alpha_q=violation_threshold_r(alpha, q) if finite else None,
    )
    if not report.violated:
        logger.info('no triangle inequality violation for p=%s q=%s alpha=%s', p, q, alpha)
    return report


def read_error_sequence(path: Union[str, Path]) -> List[float]:
    """One error per CSV line, blank lines skipped"""
    errors = []
    with open(path, newline='', encoding='utf-8') as handle:
        reader = csv.reader(handle)
        for row in reader:
            if not row or not row[0].strip():
                continue
            try:
                errors.append(float(row[0]))
            except ValueError as error:
                raise ErrorSequenceFormatError(f'{path}:{reader.line_num}: not a number: {row[0]!r}') from error
    return errors
