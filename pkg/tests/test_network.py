"""Test the network model, size accounting, realization and JSON documents"""
# pylint:disable=C0103,C0114,C0115,C0116,W0621,W0402
import json

import numpy as np
import pytest
from pydantic import ValidationError

from nncalc.builders import build_square
from nncalc.calculus import identity_network
from nncalc.errors import DimensionMismatch, NetworkFormatError, OutputActivationError
from nncalc.interface import IDENTITY, RELU, ActivationKind, ActivationTag
from nncalc.network import (
    Layer,
    NeuralNetwork,
    activation_family,
    affine_network,
    from_weights_strict,
    is_strict,
    load_network,
    network_from_json,
    network_to_json,
    realize,
    realize_batch,
    save_network,
    validate,
    weights_of,
)


def test_relu_power_one_is_relu():
    assert ActivationTag.relu(1) == RELU
    assert ActivationTag(kind=ActivationKind.relu, power=1) == RELU
    assert ActivationTag.relu(2) != RELU
    assert str(ActivationTag.relu(3)) == 'relu^3'


def test_identity_takes_no_power():
    with pytest.raises(ValidationError):
        ActivationTag(kind=ActivationKind.identity, power=2)


def test_relu_power_must_be_positive():
    with pytest.raises(ValidationError):
        ActivationTag.relu(0)


def test_validate_square_m2():
    report = validate(build_square(2))
    assert (report.layers, report.weights, report.dim_in, report.dim_out) == (2, 10, 1, 1)
    assert report.per_layer_weights == (6, 4)


def test_validate_identity_layer():
    report = validate(affine_network(np.eye(3)))
    assert (report.layers, report.neurons, report.weights, report.connectivity) == (1, 0, 3, 3)


def test_validate_excludes_zero_entries():
    net = affine_network([[1.0, 0.0], [0.0, 0.0]], [0.0, 1.0])
    assert validate(net).first_layer_weights == 2


def test_validate_counts_hidden_neurons_only(factory):
    for _ in range(20):
        net = factory.network(min_depth=2)
        report = validate(net)
        assert report.neurons == sum(layer.dim_out for layer in net.layers[:-1])
        assert report.weights == sum(report.per_layer_weights)
        assert report.connectivity <= report.weights


def test_validate_broken_chain():
    net = NeuralNetwork((Layer.uniform(np.ones((2, 1)), np.zeros(2), RELU), Layer.uniform(np.ones((1, 3)), [0.0], IDENTITY)))
    with pytest.raises(DimensionMismatch):
        validate(net)


def test_validate_relu_output():
    net = NeuralNetwork((Layer.uniform(np.ones((1, 1)), [0.0], RELU),))
    with pytest.raises(OutputActivationError):
        validate(net)


def test_layer_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        Layer(np.ones((2, 2)), np.zeros(3), (RELU, RELU))


def test_layer_arrays_are_read_only():
    layer = Layer.uniform(np.ones((2, 2)), np.zeros(2), RELU)
    with pytest.raises(ValueError):
        layer.A[0, 0] = 5.0


def test_layer_and_network_are_frozen_models():
    layer = Layer.uniform(np.ones((2, 2)), np.zeros(2), IDENTITY)
    with pytest.raises(ValidationError):
        layer.A = np.zeros((2, 2))
    net = NeuralNetwork([layer])
    assert net.layers == (layer,)
    with pytest.raises(ValidationError):
        net.layers = ()
    assert net == net
    assert net != NeuralNetwork([layer])


def test_network_needs_a_layer():
    with pytest.raises(DimensionMismatch):
        NeuralNetwork(())


def test_realize_identity_network():
    assert realize(identity_network(2, 3), [-1.5, 2.0]).tolist() == [-1.5, 2.0]


def test_realize_square_m3_at_half():
    assert realize(build_square(3), 0.5)[0] == pytest.approx(0.25, abs=1e-15)


def test_realize_all_inactive_applies_last_affine_to_zero():
    weights = [
        (-np.ones((3, 2)), -np.ones(3)),
        (np.ones((2, 3)), np.array([0.5, -0.25])),
    ]
    net = from_weights_strict(weights)
    assert realize(net, [1.0, 2.0]).tolist() == [0.5, -0.25]


def test_realize_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        realize(affine_network(np.eye(2)), [1.0, 2.0, 3.0])


def test_realize_is_deterministic(factory):
    net = factory.network(dim_in=3)
    x = factory.inputs(3, 1)[0]
    assert realize(net, x).tobytes() == realize(net, x).tobytes()


def test_realize_batch_matches_realize(factory):
    net = factory.network(dim_in=2, min_depth=2)
    X = factory.inputs(2, 50)
    batch = realize_batch(net, X, chunk=7)
    for x, row in zip(X, batch):
        assert np.allclose(realize(net, x), row, rtol=0.0, atol=1e-12)


def test_relu_power_activation():
    net = NeuralNetwork((
        Layer(np.array([[1.0], [1.0]]), np.zeros(2), (ActivationTag.relu(3), IDENTITY)),
        Layer.uniform(np.array([[1.0, 1.0]]), [0.0], IDENTITY),
    ))
    assert realize(net, [2.0])[0] == 10.0
    assert realize(net, [-2.0])[0] == -2.0
    assert activation_family(net) == frozenset({ActivationTag.relu(3)})
    assert not is_strict(net, 3)


def test_from_weights_strict_single_layer():
    net = from_weights_strict([(np.eye(2), np.zeros(2))], 3)
    assert net.depth == 1
    assert net.first.acts == (IDENTITY, IDENTITY)


def test_from_weights_strict_power():
    net = from_weights_strict([(np.ones((2, 1)), np.zeros(2)), (np.ones((1, 2)), np.zeros(1))], 2)
    assert is_strict(net, 2)
    assert realize(net, [3.0])[0] == 18.0


def test_from_weights_strict_round_trip(factory):
    net = factory.network(dim_in=2, min_depth=2)
    rebuilt = from_weights_strict(weights_of(net), 1)
    X = factory.inputs(2, 100)
    assert np.array_equal(realize_batch(net, X), realize_batch(rebuilt, X))


def test_from_weights_strict_broken_chain():
    with pytest.raises(DimensionMismatch):
        from_weights_strict([(np.ones((2, 1)), np.zeros(2)), (np.ones((1, 3)), np.zeros(1))])


def test_json_document_shape():
    net = NeuralNetwork((
        Layer(np.array([[1.0], [-0.5]]), np.array([0.0, 0.1]), (RELU, ActivationTag.relu(2))),
        Layer.uniform(np.array([[1.0, 1.0]]), [0.0], IDENTITY),
    ))
    document = json.loads(network_to_json(net))
    assert document['version'] == 1
    assert document['layers'][0]['acts'] == ['relu', {'relu_pow': 2}]
    assert document['layers'][1]['acts'] == ['id']
    assert document['layers'][0]['b'] == [0.0, 0.1]


def test_json_preserves_weights_bit_exactly(factory, tmp_path):
    net = factory.network(dim_in=3, min_depth=2)
    loaded = load_network(save_network(net, tmp_path / 'net.json'))
    for original, restored in zip(net.layers, loaded.layers):
        assert original.A.tobytes() == restored.A.tobytes()
        assert original.b.tobytes() == restored.b.tobytes()
        assert original.acts == restored.acts


@pytest.mark.parametrize(
    'text',
    (
        '{"version": 2, "layers": [{"A": [[1.0]], "b": [0.0], "acts": ["id"]}]}',
        '{"version": 1, "layers": []}',
        '{"version": 1, "layers": [{"A": [[1.0]], "b": [0.0], "acts": ["tanh"]}]}',
        '{"version": 1, "layers": [{"A": [[1.0]], "b": [0.0], "acts": [{"relu_pow": 0}]}]}',
        '{"version": 1, "layers": [{"A": [[1.0], [2.0, 3.0]], "b": [0.0, 0.0], "acts": ["id", "id"]}]}',
        '{"version": 1, "layers": [{"A": [[1.0]], "b": [0.0], "acts": ["relu"]}]}',
        'not json',
    ),
)
def test_json_rejects_invalid_documents(text):
    with pytest.raises((NetworkFormatError, OutputActivationError)):
        network_from_json(text)
