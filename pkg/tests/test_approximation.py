"""Test approximation class quasi-norms and sparse best approximation"""
# pylint:disable=C0103,C0114,C0115,C0116,W0621,W0402
import math

import pytest
from hypothesis import assume, given, settings
import hypothesis.strategies as st
from pydantic import ValidationError

from nncalc.besov import (
    approximation_quasinorm,
    quasinorm_report,
    read_error_sequence,
    sparse_best_approx_brute,
    sparse_best_approx_error,
    triangle_violation_demo,
    violation_threshold_beta,
    violation_threshold_r,
)
from nncalc.besov.approximation import sparse_error_sequence
from nncalc.errors import ApproximationDomainError, ErrorSequenceFormatError
from nncalc.interface import QuasiNormParams, SparseApproxInstance, TailPolicy

# bounded away from the subnormal range, where powers lose relative precision
magnitudes = st.one_of(st.just(0.0), st.floats(1e-3, 10.0))
errors_strategy = st.lists(magnitudes, min_size=1, max_size=20)


@pytest.mark.parametrize(
    'errors, alpha, q, expected',
    (
        ([1.0, 0.5], 1.0, 1.0, 1.5),
        ([1.0, 0.5], 1.0, 2.0, math.sqrt(1.5)),
        ([1.0, 0.5, 0.25], 1.0, math.inf, 1.0),
        ([0.1, 0.4], 2.0, math.inf, 1.6),
        ([], 1.0, 1.0, 0.0),
        ([0.0, 0.0], 3.0, 0.5, 0.0),
    ),
)
def test_quasinorm_examples(errors, alpha, q, expected):
    assert approximation_quasinorm(errors, QuasiNormParams(alpha=alpha, q=q)) == pytest.approx(expected)


@given(errors_strategy, magnitudes, st.floats(0.1, 3.0), st.floats(0.5, 4.0))
@settings(max_examples=100, deadline=None)
def test_quasinorm_is_homogeneous(errors, scale, alpha, q):
    params = QuasiNormParams(alpha=alpha, q=q)
    base = approximation_quasinorm(errors, params)
    assume(math.isfinite(base))
    scaled = approximation_quasinorm([scale * e for e in errors], params)
    assert scaled == pytest.approx(scale * base, rel=1e-9, abs=1e-300)


@given(errors_strategy, st.floats(0.1, 3.0), st.floats(0.5, 4.0))
@settings(max_examples=100, deadline=None)
def test_quasinorm_ignores_trailing_zeros(errors, alpha, q):
    params = QuasiNormParams(alpha=alpha, q=q)
    padded = approximation_quasinorm(errors + [0.0, 0.0], params)
    assert padded == pytest.approx(approximation_quasinorm(errors, params), rel=1e-12, abs=1e-300)


def test_quasinorm_rejects_negative_errors():
    with pytest.raises(ApproximationDomainError):
        approximation_quasinorm([1.0, -0.1], QuasiNormParams(alpha=1.0, q=1.0))


@pytest.mark.parametrize('alpha, q', ((0.0, 1.0), (1.0, 0.0), (math.inf, 1.0)))
def test_params_validation(alpha, q):
    with pytest.raises(ValidationError):
        QuasiNormParams(alpha=alpha, q=q)


def test_report_tail_policy():
    params = QuasiNormParams(alpha=1.0, q=1.0)
    exact = quasinorm_report([1.0, 0.5], params)
    assert exact.exact
    assert exact.tail == TailPolicy.zero
    assert exact.terms == 2
    assert exact.last_term == pytest.approx(0.5)
    lower = quasinorm_report([1.0, 0.5], params, TailPolicy.unknown)
    assert not lower.exact
    assert lower.value == exact.value


@pytest.mark.parametrize('n, expected', ((0, 6.0), (1, 3.0), (2, 1.0), (3, 0.0), (5, 0.0)))
def test_sparse_best_approx_l1(n, expected):
    assert sparse_best_approx_error(SparseApproxInstance(x=(3.0, -1.0, 2.0), p=1.0), n) == expected


def test_sparse_best_approx_quasi_norm():
    inst = SparseApproxInstance(x=(1.0, 1.0, 4.0), p=0.5)
    assert sparse_best_approx_error(inst, 1) == pytest.approx(4.0)


@given(
    st.lists(st.one_of(magnitudes, magnitudes.map(lambda v: -v)), min_size=1, max_size=6),
    st.floats(0.25, 4.0),
    st.integers(0, 7),
)
@settings(max_examples=200, deadline=None)
def test_sparse_best_approx_matches_brute_force(x, p, n):
    inst = SparseApproxInstance(x=x, p=p)
    assert sparse_best_approx_error(inst, n) == pytest.approx(sparse_best_approx_brute(inst, n), rel=1e-12, abs=1e-300)


def test_sparse_best_approx_rejects_negative_sparsity():
    with pytest.raises(ApproximationDomainError):
        sparse_best_approx_error(SparseApproxInstance(x=(1.0,), p=1.0), -1)


def test_sparse_instance_rejects_non_finite():
    with pytest.raises(ValidationError):
        SparseApproxInstance(x=(1.0, math.nan), p=1.0)


def test_sparse_error_sequence():
    assert sparse_error_sequence((1.0, 1.0), 1.0) == [2.0, 1.0, 0.0]
    assert sparse_error_sequence((1.0, 0.0), 2.0, length=5) == [1.0, 0.0, 0.0, 0.0, 0.0]


def test_thresholds():
    assert violation_threshold_beta(1.0) == 1.0
    assert violation_threshold_beta(2.0) == pytest.approx((1.0 + math.log2(3.0)) / 2.0)
    assert violation_threshold_r(1.0, 1.0) is None
    assert violation_threshold_r(0.1, 1.0) == pytest.approx(1.0 / math.log2(2.0 - 2.0 ** -0.9))


@pytest.mark.parametrize(
    'p, q, alpha, violated',
    (
        (1.0, 1.0, 1.0, True),
        (2.0, 2.0, 0.25, False),
        (0.5, 1.0, 0.1, True),
        (1.0, math.inf, 2.0, True),
        (1.0, math.inf, 0.5, False),
        (0.5, math.inf, 0.5, True),
    ),
)
def test_triangle_violation(p, q, alpha, violated):
    report = triangle_violation_demo(p, q, alpha)
    assert report.norm_e1 == pytest.approx(1.0)
    assert report.norm_e2 == pytest.approx(1.0)
    assert report.violated is violated
    assert report.predicted is violated
    assert (report.beta_q is None) is math.isinf(q)


def test_triangle_sum_norm_closed_form():
    report = triangle_violation_demo(1.0, 2.0, 0.5)
    assert report.norm_sum == pytest.approx(math.sqrt(4.0 + 2.0 ** 0.0))
    assert report.gap == pytest.approx(report.norm_sum - 2.0)


def test_triangle_rejects_non_positive_p():
    with pytest.raises(ApproximationDomainError):
        triangle_violation_demo(0.0, 1.0, 1.0)


def test_read_error_sequence(tmp_path):
    path = tmp_path / 'errors.csv'
    path.write_text('1.0\n\n0.5\n0.25,ignored\n', encoding='utf-8')
    assert read_error_sequence(path) == [1.0, 0.5, 0.25]


def test_read_error_sequence_names_bad_line(tmp_path):
    path = tmp_path / 'errors.csv'
    path.write_text('1.0\n\n0.5\nhalf\n', encoding='utf-8')
    with pytest.raises(ErrorSequenceFormatError, match=r"errors\.csv:4: not a number: 'half'"):
        read_error_sequence(path)


@pytest.mark.parametrize('alpha, q', ((1.0, 1e308), (1e308, 1.0)))
def test_quasinorm_overflow_is_a_domain_error(alpha, q):
    params = QuasiNormParams(alpha=alpha, q=q)
    with pytest.raises(ApproximationDomainError, match='overflows'):
        approximation_quasinorm([3.0, 1.0], params)
    with pytest.raises(ApproximationDomainError, match='overflows'):
        quasinorm_report([3.0, 1.0], params)
