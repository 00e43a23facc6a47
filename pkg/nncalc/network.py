"""Network data model, size accounting and realization"""
from __future__ import annotations
import json
import logging
from pathlib import Path
from typing import List, Literal, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError

from .constants import EVAL_CHUNK, NETWORK_FORMAT_VERSION
from .errors import (
    DimensionMismatch,
    NetworkFormatError,
    OutputActivationError,
)
from .interface import IDENTITY, ActivationTag, SizeReport
from .linalg import norm0

logger = logging.getLogger(__name__)

Weights = Tuple[Tuple[np.ndarray, np.ndarray], ...]


def _frozen_array(value, ndim: int) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    if array.ndim != ndim:
        raise DimensionMismatch(f'expected a {ndim}-d array, got shape {array.shape}')
    array.setflags(write=False)
    return array


class Layer(BaseModel):
    """Affine map x -> A x + b followed by per-neuron activations"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    A: np.ndarray
    b: np.ndarray
    acts: Tuple[ActivationTag, ...]
    _powers: np.ndarray = PrivateAttr()

    # layers compare by identity, arrays have no boolean equality
    __eq__ = object.__eq__
    __hash__ = object.__hash__

    def __init__(self, A, b, acts: Sequence[ActivationTag]):
        A = _frozen_array(A, 2)
        b = _frozen_array(b, 1)
        acts = tuple(acts)
        if not A.shape[0] == b.shape[0] == len(acts):
            raise DimensionMismatch(
                f'layer needs rows(A) = len(b) = len(acts), got {A.shape[0]}, {b.shape[0]}, {len(acts)}'
            )
        super().__init__(A=A, b=b, acts=acts)
        powers = np.array([act.exponent for act in acts], dtype=np.int64)
        powers.setflags(write=False)
        self._powers = powers

    @classmethod
    def uniform(cls, A, b, act: ActivationTag) -> 'Layer':
        """Layer whose neurons all share `act`"""
        rows = np.shape(A)[0]
        return cls(A, b, (act,) * rows)

    @property
    def dim_in(self) -> int:
        return int(self.A.shape[1])

    @property
    def dim_out(self) -> int:
        return int(self.A.shape[0])

    @property
    def weights(self) -> int:
        return norm0(self.A) + norm0(self.b)

    @property
    def is_linear(self) -> bool:
        return not np.any(self._powers)

    def activate(self, z: np.ndarray) -> np.ndarray:
        """Apply the activations to pre-activations `z` (last axis runs over neurons)"""
        if self.is_linear:
            return z
        out = np.array(z, copy=True)
        active = self._powers > 0
        out[..., active] = np.maximum(z[..., active], 0.0) ** self._powers[active]
        return out

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.activate(x @ self.A.T + self.b)


class NeuralNetwork(BaseModel):
    """
    A finite sequence of layers.
    Construction only checks that layers are well formed, chaining and
    output activations are checked by `validate`.
    """

    model_config = ConfigDict(frozen=True)

    layers: Tuple[Layer, ...]

    __eq__ = object.__eq__
    __hash__ = object.__hash__

    def __init__(self, layers: Sequence[Layer]):
        layers = tuple(layers)
        if not layers:
            raise DimensionMismatch('a network needs at least one layer')
        super().__init__(layers=layers)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def dim_in(self) -> int:
        return self.layers[0].dim_in

    @property
    def dim_out(self) -> int:
        return self.layers[-1].dim_out

    @property
    def first(self) -> Layer:
        return self.layers[0]

    @property
    def last(self) -> Layer:
        return self.layers[-1]

    def __len__(self) -> int:
        return len(self.layers)

    def __call__(self, x) -> np.ndarray:
        return realize(self, x)


def validate(net: NeuralNetwork) -> SizeReport:
    """
    Check the dimension chain and the identity output, return exact size metrics
    :param net: candidate network
    :return:
    """
    for index, (prev, layer) in enumerate(zip(net.layers, net.layers[1:]), start=2):
        if layer.dim_in != prev.dim_out:
            raise DimensionMismatch(
                f'layer {index} expects {layer.dim_in} inputs but layer {index - 1} has {prev.dim_out} outputs'
            )
    if not all(act.is_identity for act in net.last.acts):
        raise OutputActivationError('the final layer must use identity activations')
    per_layer = tuple(layer.weights for layer in net.layers)
    return SizeReport(
        layers=net.depth,
        neurons=sum(layer.dim_out for layer in net.layers[:-1]),
        weights=sum(per_layer),
        connectivity=sum(norm0(layer.A) for layer in net.layers),
        per_layer_weights=per_layer,
        dim_in=net.dim_in,
        dim_out=net.dim_out,
    )


def realize(net: NeuralNetwork, x) -> np.ndarray:
    """Evaluate the realization of `net` at a single input vector"""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape != (net.dim_in,):
        raise DimensionMismatch(f'input of length {net.dim_in} expected, got shape {x.shape}')
    for layer in net.layers:
        x = layer(x)
    return x


def realize_batch(net: NeuralNetwork, X, chunk: int = EVAL_CHUNK) -> np.ndarray:
    """Evaluate the realization row by row on a (k, dim_in) array"""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1 and net.dim_in == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[1] != net.dim_in:
        raise DimensionMismatch(f'batch of shape (k, {net.dim_in}) expected, got {X.shape}')
    out = np.empty((X.shape[0], net.dim_out))
    for start in range(0, X.shape[0], chunk):
        h = X[start:start + chunk]
        for layer in net.layers:
            h = layer(h)
        out[start:start + chunk] = h
    return out


def from_weights_strict(weights: Sequence[Tuple[object, object]], r: int = 1) -> NeuralNetwork:
    """
    The strict network with weights `weights`: relu^r on every hidden neuron, identity output
    :param weights: (A, b) pairs, first layer first
    :param r: ReLU power of the hidden layers
    :return:
    """
    if not weights:
        raise DimensionMismatch('empty weight list')
    hidden = ActivationTag.relu(r)
    layers: List[Layer] = []
    for index, (A, b) in enumerate(weights):
        act = IDENTITY if index == len(weights) - 1 else hidden
        layers.append(Layer.uniform(A, b, act))
    net = NeuralNetwork(tuple(layers))
    validate(net)
    return net


def affine_network(A, b=None) -> NeuralNetwork:
    """One-layer network realizing x -> A x + b"""
    A = np.asarray(A, dtype=np.float64)
    if b is None:
        b = np.zeros(A.shape[0])
    return NeuralNetwork((Layer.uniform(A, b, IDENTITY),))


def weights_of(net: NeuralNetwork) -> Weights:
    """W(net), the (A, b) pairs of every layer"""
    return tuple((layer.A, layer.b) for layer in net.layers)


def activation_family(net: NeuralNetwork) -> frozenset:
    """Non-identity activations used by hidden layers"""
    return frozenset(act for layer in net.layers[:-1] for act in layer.acts if not act.is_identity)


def is_strict(net: NeuralNetwork, power: int = 1) -> bool:
    """True when every hidden neuron is relu^power"""
    target = ActivationTag.relu(power)
    return all(act == target for layer in net.layers[:-1] for act in layer.acts)


# serialization


class _ReluPowerDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    relu_pow: int = Field(..., ge=1)


class _LayerDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    A: List[List[float]]
    b: List[float]
    acts: List[Union[Literal['relu', 'id'], _ReluPowerDocument]]


class NetworkDocument(BaseModel):
    """JSON document of a network"""

    model_config = ConfigDict(extra='forbid')

    version: Literal[1]
    layers: List[_LayerDocument] = Field(..., min_length=1)


def _act_to_json(act: ActivationTag):
    if act.is_identity:
        return 'id'
    return 'relu' if act.power == 1 else {'relu_pow': act.power}


def _act_from_json(value) -> ActivationTag:
    if value == 'id':
        return IDENTITY
    if value == 'relu':
        return ActivationTag.relu()
    return ActivationTag.relu(value.relu_pow)


def network_to_dict(net: NeuralNetwork) -> dict:
    return {
        'version': NETWORK_FORMAT_VERSION,
        'layers': [
            {
                'A': layer.A.tolist(),
                'b': layer.b.tolist(),
                'acts': [_act_to_json(act) for act in layer.acts],
            }
            for layer in net.layers
        ],
    }


def network_to_json(net: NeuralNetwork) -> str:
    """Serialize with shortest round-trip float literals"""
    validate(net)
    try:
        return json.dumps(network_to_dict(net), separators=(', ', ':'), allow_nan=False)
    except ValueError as exc:
        raise NetworkFormatError(f'network has non-finite weights: {exc}') from exc


def network_from_json(text: Union[str, bytes]) -> NeuralNetwork:
    """Parse and validate a network document"""
    try:
        document = NetworkDocument.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise NetworkFormatError(
            f"invalid network document: {exc.error_count()} error(s), {first['msg']} at {first['loc']}"
        ) from exc
    layers = []
    for index, item in enumerate(document.layers, start=1):
        try:
            A = np.array(item.A, dtype=np.float64)
        except ValueError as exc:
            raise NetworkFormatError(f'layer {index}: A is not rectangular') from exc
        if A.ndim != 2 or A.shape[1] == 0:
            raise NetworkFormatError(f'layer {index}: A must be a non-empty rectangular matrix')
        layers.append(Layer(A, item.b, tuple(_act_from_json(act) for act in item.acts)))
    net = NeuralNetwork(tuple(layers))
    validate(net)
    return net


def save_network(net: NeuralNetwork, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(network_to_json(net) + '\n', encoding='utf-8')
    logger.info('network with %s layers written to %s', net.depth, path)
    return path


def load_network(path: Union[str, Path]) -> NeuralNetwork:
    return network_from_json(Path(path).read_text(encoding='utf-8'))