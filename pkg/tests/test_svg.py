import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from cordage import gadgets
from cordage.model import NetworkError
from cordage.solver import find_configuration
from cordage.svg import render_svg
from cordage.tracer import trace_boundary

NS = "{http://www.w3.org/2000/svg}"


def parse(text):
    return ET.fromstring(text.split("\n", 1)[1])


def test_y_network_figure():
    net = gadgets.y_network()
    svg = render_svg(net, find_configuration(net))
    root = parse(svg)
    assert len(root.findall(NS + "polyline")) == 3
    squares = [e for e in root.findall(NS + "rect") if e.find(NS + "title") is not None]
    # every node ends a cord, the three corners are anchored
    assert len(squares) == 4
    assert sorted(e.get("fill") for e in squares) == ["black", "black", "black", "white"]
    assert "screen = offset" in svg


def test_interior_nodes_are_circles():
    net = gadgets.gardeners_ellipse()
    root = parse(render_svg(net, find_configuration(net)))
    (circle,) = root.findall(NS + "circle")
    assert circle.find(NS + "title").text == "pencil" and circle.get("fill") == "white"


def test_vesica_boundary_is_two_arcs():
    net = gadgets.vesica()
    trace = trace_boundary(net, "n", ("n", 0), (-1.0, 1.0), 41)
    svg = render_svg(net, trace.samples[0].configuration, [trace.points])
    (path,) = parse(svg).findall(NS + "path")
    assert path.get("d").startswith("M") and path.get("d").count("L") == 40
    # the arcs meet at a corner at the top: the highest screen point (smallest v) is in the middle
    pts = np.array([[float(v) for v in p.split(",")] for p in re.findall(r"[-\d.]+,[-\d.]+", path.get("d"))])
    assert np.argmin(pts[:, 1]) == 20


def test_empty_trace_is_a_valid_document():
    root = parse(render_svg(None, None, [np.zeros((0, 2))]))
    assert root.tag == NS + "svg" and not root.findall(NS + "path")


def test_output_is_deterministic():
    net = gadgets.clothesline()
    rho = find_configuration(net)
    assert render_svg(net, rho) == render_svg(net, rho)


def test_three_dimensions_need_a_projection():
    net = gadgets.cartesian3d()
    rho = find_configuration(net)
    with pytest.raises(NetworkError, match="--project"):
        render_svg(net, rho)
    assert "<svg" in render_svg(net, rho, axes=(0, 2))
