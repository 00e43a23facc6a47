"""Test the bump network"""
# pylint:disable=C0103,C0114,C0115,C0116,W0621,W0402
import numpy as np
import pytest

from nncalc.besov import bump
from nncalc.builders import BumpBuilder, build_bump_network, bump_network_error
from nncalc.errors import ApproximationDomainError
from nncalc.interface import ActivationTag
from nncalc.network import activation_family, realize, validate


@pytest.mark.parametrize('r, d, delta', ((1, 1, 0.25), (2, 1, 0.1), (2, 2, 0.25), (3, 2, 0.2)))
def test_bump_network_matches_bump(r, d, delta):
    certificate = bump_network_error(r, d, delta, samples=300, seed=2)
    assert certificate.passed


def test_bump_network_layout():
    net = build_bump_network(2, 3, 0.2)
    report = validate(net)
    assert report.layers == 3
    assert report.neurons == 2 * 3 * 3 + 3
    assert activation_family(net) == frozenset({ActivationTag.relu(2)})


def test_bump_network_plateau():
    net = build_bump_network(2, 2, 0.25)
    assert realize(net, [0.5, 0.5])[0] == pytest.approx(1.0, abs=1e-12)
    assert realize(net, [0.3, 0.7])[0] == pytest.approx(1.0, abs=1e-12)
    assert realize(net, [-0.2, 0.5])[0] == pytest.approx(0.0, abs=1e-12)
    assert realize(net, [0.1, 0.5])[0] == pytest.approx(bump(2, 2, 0.25, np.array([0.1, 0.5])), abs=1e-12)


def test_bump_builder():
    builder = BumpBuilder(2, 2, 0.25)
    assert builder.size_bound(builder.size_report())
    assert builder.certify(samples=50).passed


@pytest.mark.parametrize('r, d, delta', ((0, 1, 0.2), (2, 0, 0.2), (2, 1, 0.6)))
def test_bump_network_rejects(r, d, delta):
    with pytest.raises(ApproximationDomainError):
        build_bump_network(r, d, delta)
