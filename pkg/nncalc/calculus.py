"""Operators on networks: concatenation, identity networks, sparse concatenation,
parallelization, scaling and sums"""
import logging
from typing import List, Sequence

import numpy as np
import scipy.linalg

from .errors import ActivationFamilyMismatch, DimensionMismatch
from .interface import IDENTITY, RELU
from .network import (
    Layer,
    NeuralNetwork,
    activation_family,
    is_strict,
    realize,
    validate,
)

logger = logging.getLogger(__name__)


def _check_family(*nets: NeuralNetwork):
    family = frozenset().union(*(activation_family(net) for net in nets))
    if len(family) > 1:
        raise ActivationFamilyMismatch(
            f'networks use different hidden activations: {sorted(str(act) for act in family)}'
        )


def _check_strict_relu(*nets: NeuralNetwork):
    for net in nets:
        if not is_strict(net, 1):
            raise ActivationFamilyMismatch(
                'operation is defined for strict ReLU networks only, got hidden activations '
                f'{sorted(str(act) for act in activation_family(net))}'
            )


def concatenate(phi1: NeuralNetwork, phi2: NeuralNetwork) -> NeuralNetwork:
    """
    phi1 . phi2, realizing R(phi1) o R(phi2).
    The last layer of phi2 and the first layer of phi1 are fused into one affine map,
    which keeps the activations of phi1's first layer.
    """
    validate(phi1)
    validate(phi2)
    if phi2.dim_out != phi1.dim_in:
        raise DimensionMismatch(f'cannot feed {phi2.dim_out} outputs into {phi1.dim_in} inputs')
    _check_family(phi1, phi2)
    inner, outer = phi2.last, phi1.first
    fused = Layer(outer.A @ inner.A, outer.A @ inner.b + outer.b, outer.acts)
    return NeuralNetwork(phi2.layers[:-1] + (fused,) + phi1.layers[1:])


def identity_network(n: int, L: int) -> NeuralNetwork:
    """
    Strict ReLU network of depth L realizing the identity on R^n,
    through x = relu(x) - relu(-x) for L >= 2
    """
    if n < 1 or L < 1:
        raise DimensionMismatch(f'identity network needs n >= 1 and L >= 1, got n={n}, L={L}')
    eye = np.eye(n)
    if L == 1:
        return NeuralNetwork((Layer.uniform(eye, np.zeros(n), IDENTITY),))
    layers = [Layer.uniform(np.vstack([eye, -eye]), np.zeros(2 * n), RELU)]
    layers.extend(Layer.uniform(np.eye(2 * n), np.zeros(2 * n), RELU) for _ in range(L - 2))
    layers.append(Layer.uniform(np.hstack([eye, -eye]), np.zeros(n), IDENTITY))
    return NeuralNetwork(tuple(layers))


def sparse_concatenate(phi1: NeuralNetwork, phi2: NeuralNetwork) -> NeuralNetwork:
    """phi1 (.) phi2 = phi1 . Id_{n,2} . phi2, which stays a strict ReLU network"""
    validate(phi1)
    validate(phi2)
    _check_strict_relu(phi1, phi2)
    if phi1.dim_in != phi2.dim_out:
        raise DimensionMismatch(f'cannot feed {phi2.dim_out} outputs into {phi1.dim_in} inputs')
    return concatenate(phi1, concatenate(identity_network(phi1.dim_in, 2), phi2))


def _pad_depth(net: NeuralNetwork, depth: int) -> NeuralNetwork:
    if net.depth == depth:
        return net
    return sparse_concatenate(identity_network(net.dim_out, depth - net.depth), net)


def parallelize(nets: Sequence[NeuralNetwork], shared_input: bool = True) -> NeuralNetwork:
    """
    Run networks side by side.
    With `shared_input` the result maps x to (R(phi1)(x), ..., R(phik)(x)), otherwise the
    input is split into consecutive blocks, one per network. Shallower networks are padded
    at the output side with identity networks.
    """
    nets = list(nets)
    if not nets:
        raise DimensionMismatch('parallelization needs at least one network')
    for net in nets:
        validate(net)
    _check_strict_relu(*nets)
    if shared_input and len({net.dim_in for net in nets}) != 1:
        raise DimensionMismatch(f'unequal input dimensions {[net.dim_in for net in nets]}')
    depth = max(net.depth for net in nets)
    padded = [_pad_depth(net, depth) for net in nets]

    layers: List[Layer] = []
    for index in range(depth):
        parts = [net.layers[index] for net in padded]
        if index == 0 and shared_input:
            A = np.vstack([part.A for part in parts])
        else:
            A = scipy.linalg.block_diag(*(part.A for part in parts))
        b = np.concatenate([part.b for part in parts])
        acts = tuple(act for part in parts for act in part.acts)
        layers.append(Layer(A, b, acts))
    return NeuralNetwork(tuple(layers))


def scale_network(net: NeuralNetwork, a: float) -> NeuralNetwork:
    """Network realizing a * R(net), only the last layer changes"""
    validate(net)
    last = net.last
    scaled = Layer(a * last.A, a * last.b, last.acts)
    if a == 0:
        logger.debug('scaling by zero clears the last layer')
    return NeuralNetwork(net.layers[:-1] + (scaled,))


def _is_degenerate(net: NeuralNetwork) -> bool:
    # fewer nonzero weights than layers forces some layer to be constant
    return validate(net).weights < net.depth


def _constant_shift(net: NeuralNetwork, constant: np.ndarray) -> NeuralNetwork:
    last = net.last
    return NeuralNetwork(net.layers[:-1] + (Layer(last.A, last.b + constant, last.acts),))


def add_networks(phi1: NeuralNetwork, phi2: NeuralNetwork) -> NeuralNetwork:
    """
    Network realizing R(phi1) + R(phi2).
    Both summands read the shared input, the shallower one is carried to the output
    through identity-activation neurons, and the two output layers are summed.
    A summand with fewer weights than layers realizes a constant and is folded into
    the bias of the other one.
    """
    validate(phi1)
    validate(phi2)
    if phi1.dim_in != phi2.dim_in or phi1.dim_out != phi2.dim_out:
        raise DimensionMismatch(
            f'summands must share dimensions, got {phi1.dim_in}->{phi1.dim_out} and {phi2.dim_in}->{phi2.dim_out}'
        )
    _check_family(phi1, phi2)

    if _is_degenerate(phi1) or _is_degenerate(phi2):
        constant, base = (phi1, phi2) if _is_degenerate(phi1) else (phi2, phi1)
        logger.debug('summand with M < L realizes a constant, folding it into the bias')
        return _constant_shift(base, realize(constant, np.zeros(constant.dim_in)))

    if phi1.depth == phi2.depth == 1:
        return NeuralNetwork((Layer(phi1.last.A + phi2.last.A, phi1.last.b + phi2.last.b, phi1.last.acts),))

    deep, shallow = (phi1, phi2) if phi1.depth >= phi2.depth else (phi2, phi1)
    depth, short = deep.depth, shallow.depth
    k = deep.dim_out
    eye = np.eye(k)
    layers: List[Layer] = []
    for index in range(depth - 1):
        upper = deep.layers[index]
        if index < short:
            lower = shallow.layers[index]
        else:
            lower = Layer.uniform(eye, np.zeros(k), IDENTITY)
        if index == 0:
            A = np.vstack([upper.A, lower.A])
        else:
            A = scipy.linalg.block_diag(upper.A, lower.A)
        layers.append(Layer(A, np.concatenate([upper.b, lower.b]), upper.acts + lower.acts))

    if short == depth:
        tail_A, tail_b = shallow.last.A, shallow.last.b
    else:
        tail_A, tail_b = eye, np.zeros(k)
    last = deep.last
    layers.append(Layer(np.hstack([last.A, tail_A]), last.b + tail_b, last.acts))
    return NeuralNetwork(tuple(layers))
