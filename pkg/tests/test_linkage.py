import math

import numpy as np
import pytest

from cordage import gadgets
from cordage.linkage import (
    Link,
    Linkage,
    LinkageError,
    Node,
    Slider,
    _System,
    backplane,
    cord_gadget,
    cord_path_length,
    crank_path,
    drive,
    expand_sliders,
    four_bar,
    inversor_readout,
    is_realization,
    linkage_from_cords,
    linkage_from_dict,
    linkage_from_network,
    linkage_to_dict,
    max_residual,
    move,
    multi_node_link,
    network_from_linkage,
    peaucellier,
    realize,
)
from cordage.model import Cord, Network, slack_report
from cordage.solver import SolveOptions, find_tense_configuration


def test_single_link_is_a_compass():
    compass = gadgets.string_compass()
    lk = linkage_from_network(compass)
    assert lk.links == (Link("c", "pencil", 1.0),)
    assert network_from_linkage(lk) == compass


def test_empty_linkage():
    assert network_from_linkage(Linkage((), ())) == Network(2, (), ())


def test_sliders_need_expanding_before_conversion():
    lk = Linkage((Node("a", (0.0, 0.0)), Node("b", (1.0, 0.0)), Node("x")), (), (Slider("x", "a", "b"),))
    with pytest.raises(LinkageError):
        network_from_linkage(lk)


def test_four_bar_realizations_are_tense():
    lk = four_bar()
    net = network_from_linkage(lk)
    rng = np.random.default_rng(0)
    current = realize(lk)
    count = 0
    while count < 20:
        nxt = move(lk, current, rng, 0.2)
        if nxt is None:
            continue
        current = nxt
        count += 1
        assert max(abs(s) for s in slack_report(net, current).slacks) < 1e-8


def test_tense_configurations_realize_the_four_bar():
    lk = four_bar()
    net = network_from_linkage(lk)
    for seed in range(5):
        rho = find_tense_configuration(net, SolveOptions(seed=seed))
        assert max_residual(lk, rho) < 1e-8


def test_single_anchored_link_realizes_on_its_circle():
    lk = Linkage((Node("c", (1.0, 2.0)), Node("x")), (Link("c", "x", 0.5),), hint={"x": (1.0, 2.5)})
    r = realize(lk)
    assert np.linalg.norm(r["x"] - np.array([1.0, 2.0])) == pytest.approx(0.5, abs=1e-12)
    assert r["x"] == pytest.approx([1.0, 2.5], abs=1e-9)


def test_impossible_triangle():
    lk = Linkage(
        (Node("a", (0.0, 0.0)), Node("b"), Node("c")),
        (Link("a", "b", 1.0), Link("b", "c", 1.0), Link("a", "c", 3.0)),
    )
    assert realize(lk, SolveOptions(restarts=4)) is None


def test_rigid_triangle_body():
    body = multi_node_link({"a": (0.0, 0.0), "b": (1.0, 0.0), "c": (0.0, 1.0)})
    assert len(body.links) == 3
    system = _System(body)
    x = system.flatten(body.hint)
    # 6 coordinates, 3 independent constraints: only the 3 rigid motions remain
    assert np.linalg.matrix_rank(system.jacobian(x)) == 3


def test_two_points_make_one_link_and_coincidence_fails():
    assert len(multi_node_link({"a": (0, 0), "b": (3, 4)}).links) == 1
    assert multi_node_link({"a": (0, 0), "b": (3, 4)}).links[0].distance == 5.0
    with pytest.raises(LinkageError):
        multi_node_link({"a": (1, 1), "b": (1, 1)})


def test_backplane_four_bar_is_a_watt_chain():
    plane = backplane([("a", (0.0, 0.0)), ("d", (4.0, 0.0))])
    lk = four_bar()
    free = Linkage(
        tuple(Node(n.id) for n in lk.nodes), lk.links + plane.links, hint={**lk.hint, "a": (0.0, 0.0), "d": (4.0, 0.0)}
    )
    # four bars in a closed chain: ground, crank, coupler, rocker
    assert len(free.links) == 4
    r = realize(free)
    assert r is not None
    assert np.linalg.norm(r["a"] - r["d"]) == pytest.approx(4.0, abs=1e-9)


def test_peaucellier_realizes_and_inverts():
    lk = peaucellier()
    r = realize(lk)
    assert r is not None and is_realization(lk, r)
    readout = inversor_readout(r)
    assert readout.product == pytest.approx(readout.corrected, abs=1e-9)
    assert readout.collinearity < 1e-9


def test_peaucellier_rhombus_and_line():
    lk = peaucellier()
    start = realize(lk)
    path = drive(lk, start, "d", crank_path(lk, 50, 0.6))
    assert len(path) == 50
    xs = np.array([r["x"] for r in path])
    assert np.ptp(xs[:, 0]) < 1e-6
    for r in path:
        sides = [np.linalg.norm(r[a] - r[b]) for a, b in (("p", "d"), ("d", "q"), ("q", "x"), ("x", "p"))]
        assert np.ptp(sides) < 1e-9


def test_peaucellier_rejects_bad_parameters():
    with pytest.raises(LinkageError):
        peaucellier(arm_lengths=(1.0, 2.0))


def one_node_gadget():
    cord = Cord(4.0, ("p", "x", "q"))
    return cord, cord_gadget(cord, {"p": (-1.0, 0.0), "q": (1.0, 0.0)}, {"x": (0.0, math.sqrt(3))})


def test_one_node_gadget_keeps_length_and_draws_an_ellipse():
    cord, lk = one_node_gadget()
    r = realize(lk)
    rng = np.random.default_rng(0)
    for _ in range(30):
        r = move(lk, r, rng, 0.05) or r
        assert cord_path_length(cord, r) == pytest.approx(4.0, abs=1e-9)
        x, y = r["x"]
        assert abs(x * x / 4 + y * y / 3 - 1) < 1e-6


def test_two_node_gadget_keeps_length():
    cord = Cord(5.0, ("p", "x", "y", "t"))
    lk = cord_gadget(cord, {"p": (0.0, 0.0), "t": (3.0, 0.0)}, {"x": (1.0, 1.0), "y": (2.0, 1.0)})
    r = realize(lk)
    rng = np.random.default_rng(1)
    for _ in range(30):
        r = move(lk, r, rng, 0.05) or r
        assert cord_path_length(cord, r) == pytest.approx(5.0, abs=1e-9)


def test_long_cords_are_unsupported():
    with pytest.raises(LinkageError, match="unsupported"):
        cord_gadget(Cord(9.0, ("a", "b", "c", "d", "e")))


def test_expanded_sliders_still_realize():
    cord, lk = one_node_gadget()
    expanded, skipped = expand_sliders(lk, realize(lk))
    assert len(skipped) == 1  # the slider on the kite's mirror line has no carrying link
    r = realize(expanded)
    assert r is not None
    assert cord_path_length(cord, r) == pytest.approx(4.0, abs=1e-9)


def test_linkage_from_cords_prefixes_private_nodes():
    net = gadgets.gardeners_ellipse()
    lk = linkage_from_cords(net, find_tense_configuration(net))
    assert {"p", "q", "pencil"} <= set(lk.node_ids)
    assert all(n in ("p", "q", "pencil") or n.startswith("c0/") for n in lk.node_ids)
    assert realize(lk) is not None


def test_dict_round_trip():
    lk = four_bar()
    assert linkage_from_dict(linkage_to_dict(lk)) == lk
    with pytest.raises(LinkageError):
        linkage_from_dict({"links": []})
