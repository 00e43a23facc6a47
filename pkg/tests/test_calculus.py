"""Test network operators and their size laws"""
# pylint:disable=C0103,C0114,C0115,C0116,W0621,W0402
import numpy as np
import pytest

from nncalc.builders import build_square
from nncalc.calculus import (
    add_networks,
    concatenate,
    identity_network,
    parallelize,
    scale_network,
    sparse_concatenate,
)
from nncalc.errors import ActivationFamilyMismatch, DimensionMismatch
from nncalc.linalg import norm0
from nncalc.network import from_weights_strict, realize, realize_batch, validate

CASES = 500


def test_concatenate_identity_layers():
    net = concatenate(identity_network(2, 1), identity_network(2, 1))
    assert net.depth == 1
    assert realize(net, [3.0, -4.0]).tolist() == [3.0, -4.0]


def test_concatenate_composes_realizations(factory):
    for _ in range(20):
        g = factory.network(dim_in=2)
        f = factory.network(dim_in=g.dim_out)
        net = concatenate(f, g)
        assert net.depth == f.depth + g.depth - 1
        for x in factory.inputs(2, 100):
            assert np.allclose(realize(net, x), realize(f, realize(g, x)), rtol=0.0, atol=1e-12)


def test_concatenate_is_associative(factory):
    h = factory.network(dim_in=3)
    g = factory.network(dim_in=h.dim_out)
    f = factory.network(dim_in=g.dim_out)
    left = concatenate(concatenate(f, g), h)
    right = concatenate(f, concatenate(g, h))
    X = factory.inputs(3, 100)
    assert np.allclose(realize_batch(left, X), realize_batch(right, X), rtol=0.0, atol=1e-12)


def test_concatenate_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        concatenate(identity_network(2, 1), identity_network(3, 1))


def test_concatenate_family_mismatch():
    relu = from_weights_strict([(np.ones((1, 1)), np.zeros(1)), (np.ones((1, 1)), np.zeros(1))], 1)
    cube = from_weights_strict([(np.ones((1, 1)), np.zeros(1)), (np.ones((1, 1)), np.zeros(1))], 3)
    with pytest.raises(ActivationFamilyMismatch):
        concatenate(relu, cube)


@pytest.mark.parametrize('n, L, weights', ((3, 1, 3), (2, 2, 8), (1, 4, 8), (2, 5, 20)))
def test_identity_network_sizes(n, L, weights):
    report = validate(identity_network(n, L))
    assert report.layers == L
    assert report.weights == weights


def test_identity_network_passes_negative_inputs():
    assert realize(identity_network(2, 4), [-1.0, -2.0]).tolist() == [-1.0, -2.0]


def test_identity_network_rejects_zero_depth():
    with pytest.raises(DimensionMismatch):
        identity_network(2, 0)


def test_sparse_concatenate_identities():
    net = sparse_concatenate(identity_network(1, 1), identity_network(1, 1))
    assert net.depth == 2
    assert realize(net, [-0.75])[0] == -0.75


def test_sparse_concatenate_squares():
    square = build_square(3)
    net = sparse_concatenate(square, square)
    assert net.depth == 6
    grid = np.linspace(0.0, 1.0, 257)
    inner = realize_batch(square, grid)
    expected = realize_batch(square, inner)
    assert np.allclose(realize_batch(net, grid), expected, rtol=0.0, atol=1e-12)
    M = validate(square).weights
    assert validate(net).weights <= 2 * M + 6 + 4


def test_sparse_concatenate_size_laws(factory):
    for _ in range(CASES):
        phi2 = factory.network(min_depth=2)
        phi1 = factory.network(dim_in=phi2.dim_out, min_depth=2)
        r1, r2 = validate(phi1), validate(phi2)
        net = sparse_concatenate(phi1, phi2)
        report = validate(net)
        # (a.2)
        assert report.layers == r1.layers + r2.layers
        # (a.3), with the exact count of the two fused seams
        assert report.weights == r1.weights + r2.weights + r2.last_layer_weights + norm0(phi1.first.A)
        assert report.weights <= r1.weights + r2.weights + r1.first_layer_weights + r2.last_layer_weights
        assert report.weights <= 2 * (r1.weights + r2.weights)
        # (a.4)
        assert report.first_layer_weights == r2.first_layer_weights
        assert report.last_layer_weights == r1.last_layer_weights


def test_sparse_concatenate_composes_realizations(factory):
    for _ in range(50):
        phi2 = factory.network(dim_in=2)
        phi1 = factory.network(dim_in=phi2.dim_out)
        net = sparse_concatenate(phi1, phi2)
        for x in factory.inputs(2, 20):
            assert np.allclose(realize(net, x), realize(phi1, realize(phi2, x)), rtol=0.0, atol=1e-12)


def test_sparse_concatenate_requires_relu():
    cube = from_weights_strict([(np.ones((1, 1)), np.zeros(1)), (np.ones((1, 1)), np.zeros(1))], 3)
    with pytest.raises(ActivationFamilyMismatch):
        sparse_concatenate(cube, cube)


def test_parallelize_identities():
    net = parallelize([identity_network(2, 1), identity_network(2, 1)])
    assert net.dim_out == 4
    assert realize(net, [1.0, -2.0]).tolist() == [1.0, -2.0, 1.0, -2.0]


def test_parallelize_equal_depth_squares():
    net = parallelize([build_square(4), build_square(4)])
    assert validate(net).weights == 80


def test_parallelize_pads_shallow_square():
    shallow, deep = build_square(3), build_square(5)
    report = validate(parallelize([shallow, deep]))
    assert report.layers == 5
    bound = sum(max(2 * net.dim_out, validate(net).last_layer_weights) for net in (shallow, deep))
    assert report.last_layer_weights <= bound


def test_parallelize_single_network(factory):
    net = factory.network(dim_in=2)
    X = factory.inputs(2, 50)
    assert np.allclose(realize_batch(parallelize([net]), X), realize_batch(net, X), rtol=0.0, atol=1e-12)


def test_parallelize_unequal_inputs():
    with pytest.raises(DimensionMismatch):
        parallelize([identity_network(2, 1), identity_network(3, 1)])


def test_parallelize_empty():
    with pytest.raises(DimensionMismatch):
        parallelize([])


def test_parallelize_size_laws(factory):
    rng = factory.rng
    for _ in range(CASES):
        k = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        nets = [factory.network(dim_in=n, min_depth=2) for _ in range(k)]
        reports = [validate(net) for net in nets]
        report = validate(parallelize(nets, shared_input=False))
        L = max(r.layers for r in reports)
        # (b.2)
        assert report.layers == L
        # (b.3)
        assert report.first_layer_weights == sum(r.first_layer_weights for r in reports)
        # (b.4)
        assert report.last_layer_weights <= sum(max(2 * r.dim_out, r.last_layer_weights) for r in reports)
        # (b.5)
        assert report.weights <= 2 * sum(r.weights for r in reports) + 4 * L * sum(r.dim_out for r in reports)
        if all(r.layers == L for r in reports):
            # (b.6), (b.7)
            assert report.last_layer_weights == sum(r.last_layer_weights for r in reports)
            assert report.weights == sum(r.weights for r in reports)


def test_parallelize_realizes_blocks(factory):
    for _ in range(50):
        nets = [factory.network(dim_in=2) for _ in range(3)]
        net = parallelize(nets, shared_input=False)
        xs = factory.inputs(2, 3)
        expected = np.concatenate([realize(phi, x) for phi, x in zip(nets, xs)])
        assert np.allclose(realize(net, xs.ravel()), expected, rtol=0.0, atol=1e-12)


def test_parallelize_shared_input(factory):
    nets = [factory.network(dim_in=3) for _ in range(3)]
    net = parallelize(nets)
    for x in factory.inputs(3, 20):
        expected = np.concatenate([realize(phi, x) for phi in nets])
        assert np.allclose(realize(net, x), expected, rtol=0.0, atol=1e-12)


def test_scale_by_one_keeps_weights():
    square = build_square(3)
    scaled = scale_network(square, 1.0)
    for original, new in zip(square.layers, scaled.layers):
        assert np.array_equal(original.A, new.A)
        assert np.array_equal(original.b, new.b)


def test_scale_square():
    assert realize(scale_network(build_square(3), -2.0), 0.5)[0] == pytest.approx(-0.5, abs=1e-15)


def test_scale_keeps_weight_count():
    square = build_square(5)
    assert validate(scale_network(square, 7.0)).weights == validate(square).weights


def test_scale_by_zero_clears_last_layer():
    square = build_square(3)
    report = validate(scale_network(square, 0.0))
    assert report.last_layer_weights == 0
    assert report.weights == validate(square).weights - validate(square).last_layer_weights
    assert realize(scale_network(square, 0.0), 0.3)[0] == 0.0


def test_add_negation_is_zero(factory):
    for _ in range(20):
        f = factory.network(dim_in=2)
        net = add_networks(f, scale_network(f, -1.0))
        assert np.allclose(realize_batch(net, factory.inputs(2, 50)), 0.0, rtol=0.0, atol=1e-12)


def test_add_squares():
    net = add_networks(build_square(3), build_square(3))
    assert realize(net, 0.5)[0] == pytest.approx(0.5, abs=1e-15)


def test_add_realizes_sum(factory):
    for _ in range(50):
        f = factory.network(dim_in=2, dim_out=2)
        g = factory.network(dim_in=2, dim_out=2)
        net = add_networks(f, g)
        for x in factory.inputs(2, 10):
            assert np.allclose(realize(net, x), realize(f, x) + realize(g, x), rtol=0.0, atol=1e-12)


def test_add_size_bound(factory):
    checked = 0
    while checked < 100:
        f = factory.network(dim_in=2, dim_out=2)
        g = factory.network(dim_in=2, dim_out=2)
        rf, rg = validate(f), validate(g)
        if rf.weights < rf.layers or rg.weights < rg.layers:
            continue
        checked += 1
        gap = abs(rf.layers - rg.layers)
        assert validate(add_networks(f, g)).weights <= rf.weights + rg.weights + gap * 2 * 2


def test_add_constant_summand_folds_into_bias():
    constant = from_weights_strict([(np.zeros((1, 1)), np.zeros(1)), (np.zeros((1, 1)), np.array([2.5]))])
    square = build_square(3)
    net = add_networks(square, constant)
    assert net.depth == square.depth
    assert realize(net, 0.5)[0] == pytest.approx(2.75, abs=1e-15)


def test_add_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        add_networks(identity_network(2, 1), identity_network(1, 1))


def test_add_family_mismatch():
    relu = from_weights_strict([(np.ones((1, 1)), np.zeros(1)), (np.ones((1, 1)), np.zeros(1))], 1)
    square = from_weights_strict([(np.ones((1, 1)), np.zeros(1)), (np.ones((1, 1)), np.zeros(1))], 2)
    with pytest.raises(ActivationFamilyMismatch):
        add_networks(relu, square)
