"""Interface models module"""
# pylint: disable=C0103
from __future__ import annotations

try:
    from enum import StrEnum
except ImportError:
    # support older versions
    from enum import Enum

    class StrEnum(str, Enum):
        """Enum with string value"""


import math
from typing import Any, Callable, Optional, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

from .constants import CERTIFICATE_SLACK
from .errors import (
    ApproximationDomainError,
    NotSPDError,
    VerificationFailure,
)


class ActivationKind(StrEnum):
    """Componentwise activations supported by the calculus"""

    identity = 'id'
    relu = 'relu'


class ActivationTag(BaseModel):
    """
    Per-neuron activation: the identity, or x -> max(0, x)^power.
    ReLU is the power one case, so ReLUPower(1) and ReLU compare equal.
    """

    model_config = ConfigDict(frozen=True)

    kind: ActivationKind = ActivationKind.relu
    power: int = Field(1, ge=1)

    @model_validator(mode='after')
    def validate_identity_power(self) -> 'ActivationTag':
        """identity carries no power"""
        if self.kind == ActivationKind.identity and self.power != 1:
            raise ValueError(f'identity activation takes no power, got {self.power}')
        return self

    @classmethod
    def identity(cls) -> 'ActivationTag':
        """Identity activation"""
        return IDENTITY

    @classmethod
    def relu(cls, power: int = 1) -> 'ActivationTag':
        """ReLU raised to `power`"""
        return RELU if power == 1 else cls(kind=ActivationKind.relu, power=power)

    @property
    def is_identity(self) -> bool:
        return self.kind == ActivationKind.identity

    @property
    def exponent(self) -> int:
        """0 for the identity, the ReLU power otherwise"""
        return 0 if self.is_identity else self.power

    def __str__(self) -> str:
        if self.is_identity:
            return 'id'
        return 'relu' if self.power == 1 else f'relu^{self.power}'


IDENTITY = ActivationTag(kind=ActivationKind.identity)
RELU = ActivationTag(kind=ActivationKind.relu)


class SizeReport(BaseModel):
    """Exact size metrics of a network"""

    model_config = ConfigDict(frozen=True)

    layers: int = Field(..., ge=1, serialization_alias='L')
    neurons: int = Field(..., ge=0, serialization_alias='N')
    weights: int = Field(..., ge=0, serialization_alias='M')
    connectivity: int = Field(..., ge=0, serialization_alias='C')
    per_layer_weights: Tuple[int, ...] = Field(..., serialization_alias='M_l')
    dim_in: int = Field(..., ge=1)
    dim_out: int = Field(..., ge=1)

    @model_validator(mode='after')
    def validate_totals(self) -> 'SizeReport':
        """M is the sum of the per-layer counts and C never exceeds it"""
        if len(self.per_layer_weights) != self.layers:
            raise ValueError('one weight count per layer is required')
        if sum(self.per_layer_weights) != self.weights:
            raise ValueError('weights must equal the sum of per-layer weights')
        if self.connectivity > self.weights:
            raise ValueError('connectivity cannot exceed the number of weights')
        return self

    @property
    def first_layer_weights(self) -> int:
        return self.per_layer_weights[0]

    @property
    def last_layer_weights(self) -> int:
        return self.per_layer_weights[-1]


class InversionSchedule(BaseModel):
    """Depth N(eps/alpha, delta) and level n(eps/alpha, delta) of the inversion network"""

    model_config = ConfigDict(frozen=True)

    eps: float = Field(..., gt=0)
    alpha: float = Field(..., gt=0)
    delta: float = Field(..., ge=0, lt=1)
    big_n: int = Field(..., ge=1, serialization_alias='N')
    little_n: int = Field(..., ge=1, serialization_alias='n')

    @model_validator(mode='after')
    def validate_order(self) -> 'InversionSchedule':
        if self.little_n < self.big_n:
            raise ValueError(f'n={self.little_n} must not be smaller than N={self.big_n}')
        return self


class InversionPlan(BaseModel):
    """
    The parameters an inversion network is actually built with.
    The series keeps the schedule's 2^N terms, the network gets what the truncation leaves of eps.
    level is the square level of every product network, 0 when N = 1 and the network is affine.
    """

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1)
    schedule: InversionSchedule
    truncation: float = Field(..., ge=0)
    network_eps: float = Field(..., gt=0)
    level: int = Field(..., ge=0)
    network_error: float = Field(..., ge=0)
    weight_bound: int
    layer_bound: int
    predicted_layers: int

    @property
    def within_size_bounds(self) -> bool:
        return self.level <= self.schedule.little_n and self.predicted_layers <= self.layer_bound


class ErrorCertificate(BaseModel):
    """Claimed bound against the measured error of a construction"""

    model_config = ConfigDict(frozen=True)

    claimed_bound: float = Field(..., ge=0, serialization_alias='claimed')
    measured_error: float = Field(..., ge=0, serialization_alias='measured')
    sample_description: str = Field('', serialization_alias='description')
    samples: int = Field(0, ge=0)
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.measured_error <= self.claimed_bound + CERTIFICATE_SLACK

    def ensure(self) -> 'ErrorCertificate':
        """Raise VerificationFailure when the measured error exceeds the claim"""
        if not self.passed:
            raise VerificationFailure(
                f'measured error {self.measured_error!r} exceeds claimed bound {self.claimed_bound!r} '
                f'({self.sample_description})'
            )
        return self


class ContractionStrategy(StrEnum):
    """How alpha is picked for ||I - alpha B||_2 <= delta"""

    optimal = 'optimal'
    interval = 'interval'


class SpdContraction(BaseModel):
    """Scaling alpha and contraction factor delta of an SPD matrix"""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., gt=0)
    delta: float = Field(..., ge=0)
    strategy: ContractionStrategy = ContractionStrategy.optimal

    @field_validator('delta')
    @classmethod
    def validate_delta(cls, value: float) -> float:
        if not value < 1:
            raise ApproximationDomainError(f'contraction factor must be below 1, got {value}')
        return value


class SolveMethod(StrEnum):
    """Galerkin linear solvers"""

    nn = 'nn'
    neumann = 'neumann'
    direct = 'direct'


class GalerkinProblem(BaseModel):
    """Stiffness system B mu = F of a hat-function Galerkin discretization"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    B: np.ndarray
    F: np.ndarray
    nodes: np.ndarray
    h: float = Field(..., gt=0)
    eigenvalues: np.ndarray
    basis: str = 'hat'
    exact_solution: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @field_validator('B', 'F', 'nodes', 'eigenvalues', mode='before')
    @classmethod
    def validate_array(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        array.setflags(write=False)
        return array

    @model_validator(mode='after')
    def validate_system(self) -> 'GalerkinProblem':
        d = self.F.shape[0]
        if self.B.shape != (d, d):
            raise ValueError(f'stiffness matrix must be {d}x{d}, got {self.B.shape}')
        if not np.allclose(self.B, self.B.T, rtol=0.0, atol=1e-12):
            raise NotSPDError('stiffness matrix is not symmetric')
        if self.lambda_min <= 0:
            raise NotSPDError(f'smallest eigenvalue must be positive, got {self.lambda_min}')
        return self

    @property
    def d(self) -> int:
        return int(self.F.shape[0])

    @property
    def lambda_min(self) -> float:
        return float(np.min(self.eigenvalues))

    @property
    def lambda_max(self) -> float:
        return float(np.max(self.eigenvalues))

    def to_json_dict(self) -> dict:
        return {
            'basis': self.basis,
            'd': self.d,
            'h': self.h,
            'B': self.B.tolist(),
            'F': self.F.tolist(),
            'nodes': self.nodes.tolist(),
            'lambda_min': self.lambda_min,
            'lambda_max': self.lambda_max,
        }


class GalerkinReport(BaseModel):
    """Outcome of one Galerkin solve"""

    model_config = ConfigDict(frozen=True)

    method: SolveMethod
    d: int
    eps: float
    error_vs_direct: Optional[float] = None
    nodal_error: Optional[float] = None
    residual: Optional[float] = None
    weights: Optional[int] = None
    layers: Optional[int] = None
    alpha: Optional[float] = None
    delta: Optional[float] = None
    terms: Optional[int] = None
    claimed_bound: Optional[float] = None
    runtime_ms: float = 0.0
    note: str = ''
    skipped: bool = False

    @property
    def passed(self) -> bool:
        """error_vs_direct within the claimed bound, always true for the direct solve and skipped methods"""
        if self.claimed_bound is None or self.error_vs_direct is None:
            return True
        return self.error_vs_direct <= self.claimed_bound * (1.0 + CERTIFICATE_SLACK) + CERTIFICATE_SLACK

    def csv_row(self, timings: bool = False) -> list:
        return [
            self.method.value,
            self.d,
            self.eps,
            '' if self.error_vs_direct is None else self.error_vs_direct,
            '' if self.nodal_error is None else self.nodal_error,
            '' if self.weights is None else self.weights,
            '' if self.layers is None else self.layers,
            round(self.runtime_ms, 3) if timings and not self.skipped else '',
            self.note,
        ]


GALERKIN_CSV_HEADER = ('method', 'd', 'eps', 'error_vs_direct', 'nodal_error', 'M', 'L', 'runtime_ms', 'note')


class QuasiNormParams(BaseModel):
    """Smoothness alpha and summability q of an approximation class"""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., gt=0)
    q: float = Field(..., gt=0)

    @field_validator('alpha')
    @classmethod
    def validate_alpha(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError('alpha must be finite')
        return value


class TailPolicy(StrEnum):
    """What is assumed about errors past the end of a truncated sequence"""

    zero = 'zero'
    unknown = 'unknown'


class QuasiNormReport(BaseModel):
    """Approximation class quasi-norm together with its truncation policy"""

    model_config = ConfigDict(frozen=True)

    value: float
    alpha: float
    q: float
    tail: TailPolicy
    terms: int
    last_term: float
    exact: bool


class SparseApproxInstance(BaseModel):
    """A vector x in R^d measured in the l^p quasi-norm"""

    model_config = ConfigDict(frozen=True)

    x: Tuple[float, ...]
    p: float = Field(..., gt=0)

    @field_validator('x', mode='before')
    @classmethod
    def validate_x(cls, value: Any) -> Tuple[float, ...]:
        values = tuple(float(v) for v in np.ravel(np.asarray(value, dtype=np.float64)))
        if not all(math.isfinite(v) for v in values):
            raise ValueError('entries must be finite')
        return values

    @field_validator('p')
    @classmethod
    def validate_p(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError('p must be finite')
        return value

    @property
    def d(self) -> int:
        return len(self.x)


class TriangleViolationReport(BaseModel):
    """Norms of e1, e2 and e1 + e2 in an approximation class built on sparse vectors"""

    model_config = ConfigDict(frozen=True)

    p: float
    q: float
    alpha: float
    norm_e1: float
    norm_e2: float
    norm_sum: float
    gap: float
    violated: bool
    predicted: bool
    beta_q: Optional[float] = None
    r_alpha_q: Optional[float] = None


class BesovEstimate(BaseModel):
    """Truncated dyadic Besov seminorm with its last term as a truncation indicator"""

    model_config = ConfigDict(frozen=True)

    value: float
    r: int
    k_max: int
    terms: Tuple[float, ...]
    last_term: float
