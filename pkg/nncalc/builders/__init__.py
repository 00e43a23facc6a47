"""Builders Package"""
# flake8: noqa
from .base import BaseBuilder, log_size
from .square import SquareBuilder, build_square, square_error, square_error_rate, square_weight_count
from .products import (
    MatrixMultBuilder,
    ScalarMultBuilder,
    build_matrix_mult,
    build_scalar_mult,
    matmul_error,
    matmul_error_bound,
    matmul_level,
    matmul_network,
    scalar_mult_error,
    scalar_mult_level,
)
from .neumann import (
    InversionBuilder,
    NeumannBuilder,
    StateBound,
    build_inversion,
    build_neumann_closing_block,
    build_neumann_doubling_block,
    build_neumann_first_block,
    build_neumann_partial,
    build_neumann_power_chain,
    chain_bounds,
    inversion_error,
    inversion_plan,
    inversion_schedule,
    neumann_depth,
    neumann_error,
    neumann_error_bound,
    neumann_layers,
    neumann_level,
    power_chain_error,
    power_chain_level,
    proof_weight_bound,
    theorem_layer_bound,
    theorem_weight_bound,
    truncation_error,
)
from .bump import BumpBuilder, build_bump_network, bump_network_error
