"""
Constructive neural network calculus package
"""
from .calculus import (
    add_networks,
    concatenate,
    identity_network,
    parallelize,
    scale_network,
    sparse_concatenate,
)
from .config import Settings
from .errors import NNCalcError
from .interface import (
    ActivationTag,
    ErrorCertificate,
    GalerkinProblem,
    GalerkinReport,
    InversionSchedule,
    SizeReport,
)
from .linalg import norm0, spectral_norm
from .network import (
    Layer,
    NeuralNetwork,
    load_network,
    realize,
    save_network,
    validate,
)
from .builders import (
    build_bump_network,
    build_inversion,
    build_matrix_mult,
    build_neumann_partial,
    build_scalar_mult,
    build_square,
)
from .galerkin import (
    assemble_poisson_1d,
    galerkin_solve,
    galerkin_solve_or_skip,
    neumann_inverse_oracle,
    spd_contraction_params,
)


def int_or_str(value):
    """int or string value"""
    try:
        return int(value)
    except ValueError:
        return value


__version__ = "0.0.1"

VERSION = tuple(map(int_or_str, __version__.split(".")))

__all__ = (
    'ActivationTag',
    'ErrorCertificate',
    'GalerkinProblem',
    'GalerkinReport',
    'InversionSchedule',
    'Layer',
    'NNCalcError',
    'NeuralNetwork',
    'Settings',
    'SizeReport',
    'add_networks',
    'assemble_poisson_1d',
    'build_bump_network',
    'build_inversion',
    'build_matrix_mult',
    'build_neumann_partial',
    'build_scalar_mult',
    'build_square',
    'concatenate',
    'galerkin_solve',
    'galerkin_solve_or_skip',
    'identity_network',
    'load_network',
    'neumann_inverse_oracle',
    'norm0',
    'parallelize',
    'realize',
    'save_network',
    'scale_network',
    'spd_contraction_params',
    'sparse_concatenate',
    'spectral_norm',
    'validate',
)
