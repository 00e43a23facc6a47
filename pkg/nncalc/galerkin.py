"""Galerkin discretization of -u'' = f on (0, 1) and the linear solvers for B mu = F"""
import csv
import json
import logging
import math
import time
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from scipy import integrate

from .builders.neumann import build_inversion
from .config import Settings, get_settings
from .constants import MAX_CONTRACTION, SIMPSON_PANELS
from .errors import ApproximationDomainError, DivergentSeriesError, NotSPDError, ScheduleError
from .interface import (
    GALERKIN_CSV_HEADER,
    ContractionStrategy,
    GalerkinProblem,
    GalerkinReport,
    SolveMethod,
    SpdContraction,
)
from .linalg import as_matrix, matricize, neumann_sum, spectral_norm, vectorize
from .network import realize, validate

logger = logging.getLogger(__name__)

Function = Callable[[np.ndarray], np.ndarray]


def poisson_load(x: np.ndarray) -> np.ndarray:
    """f(x) = pi^2 sin(pi x)"""
    return np.pi ** 2 * np.sin(np.pi * x)


def poisson_solution(x: np.ndarray) -> np.ndarray:
    """u(x) = sin(pi x), the solution for `poisson_load`"""
    return np.sin(np.pi * x)


def _hat(nodes: np.ndarray, h: float, i: int, x: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, 1.0 - np.abs(x - nodes[i]) / h)


def _load_vector(f: Function, nodes: np.ndarray, h: float, panels: int) -> np.ndarray:
    """F_i = int f phi_i, composite Simpson with `panels` panels on each of the two supporting elements"""
    F = np.empty(nodes.shape[0])
    for i, node in enumerate(nodes):
        total = 0.0
        for left in (node - h, node):
            x = np.linspace(left, left + h, panels + 1)
            total += integrate.simpson(np.asarray(f(x), dtype=np.float64) * _hat(nodes, h, i, x), x=x)
        F[i] = total
    return F


def assemble_poisson_1d(
    d: int,
    f: Optional[Function] = None,
    exact_solution: Optional[Function] = None,
    panels: int = SIMPSON_PANELS,
) -> GalerkinProblem:
    """
    Hat-function Galerkin system of -u'' = f with zero boundary values on d interior nodes.
    B = (1/h) tridiag(-1, 2, -1), h = 1/(d + 1), with eigenvalues (2/h)(1 - cos(k pi h)).
    Without `f` the problem is f = pi^2 sin(pi x) with exact solution sin(pi x).
    :param d: number of interior nodes
    :param f: vectorized load function
    :param exact_solution: vectorized solution, used for nodal errors
    :param panels: Simpson panels per element
    :return:
    """
    if d < 1:
        raise ApproximationDomainError(f'd must be at least 1, got {d}')
    if panels < 2 or panels % 2:
        raise ApproximationDomainError(f'Simpson needs an even number of panels, got {panels}')
    if f is None:
        f = poisson_load
        exact_solution = poisson_solution if exact_solution is None else exact_solution
    h = 1.0 / (d + 1)
    nodes = h * np.arange(1, d + 1)
    column = np.zeros(d)
    column[0] = 2.0
    column[1:2] = -1.0
    B = scipy.linalg.toeplitz(column) / h
    k = np.arange(1, d + 1)
    eigenvalues = (2.0 / h) * (1.0 - np.cos(k * np.pi * h))
    logger.debug('assembled 1D Poisson d=%s h=%s lambda=[%s, %s]', d, h, eigenvalues.min(), eigenvalues.max())
    return GalerkinProblem(
        B=B,
        F=_load_vector(f, nodes, h, panels),
        nodes=nodes,
        h=h,
        eigenvalues=eigenvalues,
        exact_solution=exact_solution,
    )


def _spd_spectrum(B: np.ndarray) -> Tuple[float, float]:
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise NotSPDError(f'expected a square matrix, got shape {B.shape}')
    if not np.allclose(B, B.T, rtol=0.0, atol=1e-12):
        raise NotSPDError('matrix is not symmetric')
    eigenvalues = scipy.linalg.eigvalsh(B)
    if eigenvalues[0] <= 0:
        raise NotSPDError(f'matrix is not positive definite, smallest eigenvalue {eigenvalues[0]}')
    return float(eigenvalues[0]), float(eigenvalues[-1])


def spd_contraction_params(
    B,
    strategy: ContractionStrategy = ContractionStrategy.optimal,
    alpha: Optional[float] = None,
) -> SpdContraction:
    """
    alpha and delta = ||I - alpha B||_2 for a symmetric positive definite B.
    optimal: alpha = 2 / (lambda_min + lambda_max), delta = (lambda_max - lambda_min) / (lambda_max + lambda_min).
    interval: alpha in (0, 1 / lambda_max], 1 / lambda_max unless given, delta = 1 - alpha lambda_min.
    """
    B = as_matrix(B)
    lam_min, lam_max = _spd_spectrum(B)
    if strategy == ContractionStrategy.optimal:
        alpha = 2.0 / (lam_min + lam_max)
        delta = (lam_max - lam_min) / (lam_max + lam_min)
    else:
        alpha = 1.0 / lam_max if alpha is None else alpha
        if not 0 < alpha <= 1.0 / lam_max * (1.0 + 1e-12):
            raise ApproximationDomainError(f'alpha must lie in (0, 1/lambda_max = {1.0 / lam_max}], got {alpha}')
        delta = 1.0 - alpha * lam_min
    logger.debug('contraction %s: alpha=%s delta=%s', strategy, alpha, delta)
    return SpdContraction(alpha=alpha, delta=max(delta, 0.0), strategy=strategy)


def neumann_inverse_oracle(B, alpha: float, terms: int) -> np.ndarray:
    """
    alpha sum_{k=0}^{terms} (I - alpha B)^k, within alpha delta^(terms+1) / (1 - delta) of B^-1
    where delta = ||I - alpha B||_2
    """
    B = as_matrix(B)
    if terms < 0:
        raise ApproximationDomainError(f'terms must be non-negative, got {terms}')
    A = np.eye(B.shape[0]) - alpha * B
    delta = spectral_norm(A)
    if delta >= 1:
        raise DivergentSeriesError(f'||I - alpha B||_2 = {delta} >= 1, the series diverges')
    return alpha * neumann_sum(A, terms + 1)


def neumann_oracle_bound(alpha: float, delta: float, terms: int) -> float:
    """alpha delta^(terms+1) / (1 - delta)"""
    return alpha * delta ** (terms + 1) / (1.0 - delta)


def neumann_terms_for(eps: float, alpha: float, delta: float) -> int:
    """Smallest `terms` with alpha delta^(terms+1) / (1 - delta) <= eps"""
    if not eps > 0:
        raise ApproximationDomainError(f'eps must be positive, got {eps}')
    if not 0 <= delta < 1 or delta > MAX_CONTRACTION:
        raise ApproximationDomainError(f'delta must lie in [0, 1), got {delta}')
    if delta == 0:
        return 0
    terms = max(0, math.ceil(math.log(eps * (1.0 - delta) / alpha) / math.log(delta)) - 1)
    while neumann_oracle_bound(alpha, delta, terms) > eps:
        terms += 1
    while terms > 0 and neumann_oracle_bound(alpha, delta, terms - 1) <= eps:
        terms -= 1
    return terms


def direct_solve(problem: GalerkinProblem) -> np.ndarray:
    """Cholesky solve of B mu = F"""
    factor = scipy.linalg.cho_factor(problem.B)
    return scipy.linalg.cho_solve(factor, problem.F)


def nodal_error(problem: GalerkinProblem, mu: np.ndarray) -> Optional[float]:
    """max_i |mu_i - u(x_i)| when the exact solution is known"""
    if problem.exact_solution is None:
        return None
    return float(np.max(np.abs(mu - problem.exact_solution(problem.nodes))))


def galerkin_solve(
    problem: GalerkinProblem,
    eps: float,
    method: SolveMethod = SolveMethod.direct,
    settings: Optional[Settings] = None,
    strategy: ContractionStrategy = ContractionStrategy.optimal,
) -> Tuple[np.ndarray, GalerkinReport]:
    """
    Solve B mu = F.
    direct: Cholesky factorization.
    neumann: the truncated series with the fewest terms that keeps the inverse within eps.
    nn: the inversion network for the (alpha, delta) of B, applied to vect(B), mu = mat(output) F.
    The neumann and nn results satisfy ||mu - mu_direct||_2 <= eps ||F||_2.
    """
    method = SolveMethod(method)
    started = time.perf_counter()
    reference = direct_solve(problem)
    extra = {}
    if method == SolveMethod.direct:
        mu = reference
    else:
        contraction = spd_contraction_params(problem.B, strategy)
        extra.update(
            alpha=contraction.alpha,
            delta=contraction.delta,
            claimed_bound=eps * float(np.linalg.norm(problem.F)),
            note=f'alpha from the {contraction.strategy} strategy',
        )
        if method == SolveMethod.neumann:
            terms = neumann_terms_for(eps, contraction.alpha, contraction.delta)
            mu = neumann_inverse_oracle(problem.B, contraction.alpha, terms) @ problem.F
            extra['terms'] = terms
        else:
            settings = get_settings(settings)
            net = build_inversion(problem.d, eps, contraction.alpha, contraction.delta, settings)
            report = validate(net)
            inverse = matricize(realize(net, vectorize(problem.B)), problem.d, problem.d)
            mu = inverse @ problem.F
            extra.update(weights=report.weights, layers=report.layers)
    runtime_ms = 1000.0 * (time.perf_counter() - started)
    report = GalerkinReport(
        method=method,
        d=problem.d,
        eps=eps,
        error_vs_direct=float(np.linalg.norm(mu - reference)),
        nodal_error=nodal_error(problem, mu),
        residual=float(np.linalg.norm(problem.B @ mu - problem.F)),
        runtime_ms=runtime_ms,
        **extra,
    )
    logger.info(
        'galerkin %s d=%s eps=%s: error vs direct %s in %.1f ms',
        method,
        problem.d,
        eps,
        report.error_vs_direct,
        runtime_ms,
    )
    return mu, report


def galerkin_solve_or_skip(
    problem: GalerkinProblem,
    eps: float,
    method: SolveMethod = SolveMethod.direct,
    settings: Optional[Settings] = None,
    strategy: ContractionStrategy = ContractionStrategy.optimal,
) -> Tuple[Optional[np.ndarray], GalerkinReport]:
    """galerkin_solve, with an nn build refused by the schedule reported as a skipped method"""
    method = SolveMethod(method)
    try:
        return galerkin_solve(problem, eps, method, settings, strategy)
    except ScheduleError as error:
        if method != SolveMethod.nn:
            raise
        logger.warning('galerkin %s d=%s eps=%s skipped: %s', method, problem.d, eps, error)
        report = GalerkinReport(
            method=method,
            d=problem.d,
            eps=eps,
            skipped=True,
            note=f'skipped: {type(error).__name__}: {error}',
        )
        return None, report


def solution_to_json_dict(
    problem: GalerkinProblem,
    solutions: Sequence[Tuple[Optional[np.ndarray], GalerkinReport]],
) -> dict:
    """Problem and one entry per solve, runtimes left out and mu null for skipped methods"""
    return {
        'problem': problem.to_json_dict(),
        'solutions': [
            {
                'mu': None if mu is None else np.asarray(mu).tolist(),
                'report': report.model_dump(mode='json', exclude={'runtime_ms'}),
            }
            for mu, report in solutions
        ],
    }


def write_solution(
    path: Union[str, Path],
    problem: GalerkinProblem,
    solutions: Sequence[Tuple[Optional[np.ndarray], GalerkinReport]],
) -> Path:
    path = Path(path)
    path.write_text(json.dumps(solution_to_json_dict(problem, solutions), indent=2, allow_nan=False), encoding='utf-8')
    return path


def write_report(path: Union[str, Path], reports: Iterable[GalerkinReport], timings: bool = False) -> Path:
    """CSV with a header row, runtime_ms left empty unless `timings` is set"""
    path = Path(path)
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(GALERKIN_CSV_HEADER)
        for report in reports:
            writer.writerow(report.csv_row(timings))
    return path
