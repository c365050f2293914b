import math

import numpy as np
import pytest

from cordage import gadgets
from cordage.firmness import (
    classify,
    config_distance,
    directions,
    expand,
    firmness_estimate,
    fit_power_law,
    max_displacement,
)
from cordage.model import Configuration, Network, NetworkError, is_configuration
from cordage.solver import find_configuration


def test_expand():
    net = Network.build(2, {"a": (0, 0)}, ["b"], [(2.0, ("a", "b"))])
    assert expand(net, 0.0) == net
    assert expand(net, 0.25).cords[0].length == 2.25
    with pytest.raises(NetworkError):
        expand(net, -1.0)


def test_configurations_survive_expansion():
    net = gadgets.clothesline()
    rho = find_configuration(net)
    assert is_configuration(expand(net, 1e-3), rho)


def test_config_distance():
    rho = Configuration({"a": (0.0, 0.0), "x": (1.0, 1.0)})
    assert config_distance(rho, rho) == 0.0
    assert config_distance(rho, rho.moved("x", (1.3, 1.4))) == pytest.approx(0.5)
    with pytest.raises(NetworkError):
        config_distance(rho, Configuration({"a": (0.0, 0.0)}))


def test_directions_are_unit():
    for d in (2, 3):
        u = directions(d, 32)
        assert np.allclose(np.linalg.norm(u, axis=1), 1.0)


def test_stretched_cord_sags_like_a_square_root():
    _, b, _ = gadgets.firm_trio()
    eps = 1e-4
    sag = math.sqrt((1 + eps / 2) ** 2 - 1)
    assert max_displacement(b, eps).value == pytest.approx(sag, rel=0.05)


def test_slack_tie_moves_linearly():
    _, _, c = gadgets.firm_trio()
    values = [max_displacement(c, e).value for e in (1e-2, 1e-3)]
    # grown ellipse against the original, both sampled densely on their boundaries
    t = np.linspace(0, 2 * np.pi, 4001)

    def boundary(length):
        a = length / 2
        return np.column_stack([a * np.cos(t), np.sqrt(a * a - 1) * np.sin(t)])

    old, new = boundary(3.0), boundary(3.01)
    gap = max(np.linalg.norm(old - p, axis=1).min() for p in new[::10])
    assert values[0] == pytest.approx(gap, abs=1e-4)
    assert values[0] / values[1] == pytest.approx(10.0, rel=0.05)


def test_static_network_does_not_move_at_zero():
    assert max_displacement(gadgets.y_network(), 0.0).value < 1e-6


def test_fit_power_law():
    eps = np.array([1e-2, 1e-3, 1e-4])
    alpha, k = fit_power_law(eps, 3 * eps**0.5)
    assert alpha == pytest.approx(0.5) and k == pytest.approx(3.0)
    assert fit_power_law(eps, np.zeros(3)) == (float("inf"), 0.0)


def test_classify():
    assert classify(1.0) == "firm"
    assert classify(0.5) == "notFirm"
    assert classify(0.75) == "inconclusive"


def test_firm_trio():
    a, b, c = gadgets.firm_trio()
    est_a = firmness_estimate(a)
    assert est_a.classification == "firm" and max(est_a.displacements) < 1e-9
    est_b = firmness_estimate(b)
    assert est_b.classification == "notFirm" and 0.4 <= est_b.exponent <= 0.6
    assert firmness_estimate(c).classification == "firm"


def test_literal_reference_mode():
    _, b, _ = gadgets.firm_trio()
    rho = find_configuration(b)
    literal = max_displacement(b, 1e-4, reference=rho).value
    assert literal >= max_displacement(b, 1e-4).value - 1e-9
