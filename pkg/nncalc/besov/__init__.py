"""Splines and Besov toolkit"""
# flake8: noqa
from .splines import (
    bspline,
    bspline_convolution_check,
    bspline_tensor,
    bump,
    bump_lp_gap,
    partition_of_unity_check,
    sawtooth,
    sawtooth_recursive,
    smooth_step,
    square_interpolant,
    square_interpolant_telescoped,
)
from .smoothness import besov_norm_discrete, besov_seminorm_discrete, modulus_of_smoothness
from .approximation import (
    approximation_quasinorm,
    quasinorm_report,
    read_error_sequence,
    sparse_best_approx_brute,
    sparse_best_approx_error,
    triangle_violation_demo,
    violation_threshold_beta,
    violation_threshold_r,
)
