"""Constants"""
# Network JSON schema version
NETWORK_FORMAT_VERSION = 1

# Absolute slack allowed between a measured error and its claimed bound
CERTIFICATE_SLACK = 1e-9

# Smallest level of the square network (its weight list needs two layers)
MIN_SQUARE_LEVEL = 2
# Largest level for which the square error is still above double precision resolution
MAX_SQUARE_LEVEL = 24

# Contraction factors closer to one than this overflow the depth schedule
MAX_CONTRACTION = 1.0 - 1e-12
# Upper bound (exclusive) on the accuracy of Neumann and inversion networks
MAX_NEUMANN_EPS = 0.25

# Environment overrides for the settings model
ENV_MAX_DIM = 'NNCALC_MAX_DIM'
ENV_MAX_WEIGHTS = 'NNCALC_MAX_WEIGHTS'
ENV_MAX_DOUBLINGS = 'NNCALC_MAX_DOUBLINGS'
ENV_WORKERS = 'NNCALC_WORKERS'

DEFAULT_MAX_DIM = 16
DEFAULT_MAX_WEIGHTS = 5_000_000
DEFAULT_MAX_DOUBLINGS = 5
DEFAULT_WORKERS = 1

# Iterative spectral norm
POWER_ITERATION_TOL = 1e-12
POWER_ITERATION_MAX_ITER = 100_000

# Rows evaluated per batch in grid sweeps
EVAL_CHUNK = 1 << 16

# Composite Simpson panels per finite element for load vectors
SIMPSON_PANELS = 64

# Modulus of smoothness resolution
MODULUS_H_COUNT = 129
MODULUS_PANELS = 1 << 12

# Tolerances of the spline checks
CONVOLUTION_TOL = 1e-8
PARTITION_TOL = 1e-10
