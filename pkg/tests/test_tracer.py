import math

import numpy as np
import pytest

from cordage import gadgets
from cordage.model import Configuration
from cordage.tracer import (
    TraceError,
    local_tense_dimension,
    residual_against_implicit_curve,
    tense_start,
    trace_boundary,
    trace_tense,
)


def ellipse_f(p):
    return p[0] ** 2 / 4 + p[1] ** 2 / 3 - 1


def ellipse_top(x):
    return Configuration({"p": (-1.0, 0.0), "q": (1.0, 0.0), "pencil": (x, math.sqrt(3 * (1 - x * x / 4)))})


def test_ellipse_tense_trace():
    net = gadgets.gardeners_ellipse()
    result = trace_tense(net, "pencil", ("pencil", 0), (-1.9, 1.9), 200, ellipse_top(-1.9))
    assert result.complete and len(result.samples) == 200
    assert residual_against_implicit_curve(result, ellipse_f) < 1e-6
    assert result.max_residual < 1e-9
    assert not result.discontinuities


def test_wrong_curve_is_noticed():
    net = gadgets.gardeners_ellipse()
    result = trace_tense(net, "pencil", ("pencil", 0), (-1.9, 1.9), 50, ellipse_top(-1.9))
    assert residual_against_implicit_curve(result, lambda p: p[0] ** 2 + p[1] ** 2 - 1) > 0.5


def test_compass_trace():
    net = gadgets.string_compass()
    start = tense_start(net, ("pencil", 0), -0.99)
    result = trace_tense(net, "pencil", ("pencil", 0), (-0.99, 0.99), 200, start)
    assert residual_against_implicit_curve(result, lambda p: np.hypot(*p) - 1) < 1e-9


def test_clothesline_copy():
    net = gadgets.clothesline()
    start = tense_start(net, ("x", 0), 0.5)
    result = trace_tense(net, "y", ("x", 0), (0.5, 3.5), 40, start)
    for s in result.samples:
        rho = s.configuration
        assert np.linalg.norm(rho["y"] - rho["q"]) == pytest.approx(np.linalg.norm(rho["x"] - rho["p"]), abs=1e-9)


def test_start_must_be_tense():
    start = ellipse_top(0.0).moved("pencil", (0.0, 0.0))
    with pytest.raises(TraceError, match="not tense"):
        trace_tense(gadgets.gardeners_ellipse(), "pencil", ("pencil", 0), (0, 1), 5, start)


def test_locally_fixed_driver():
    net = gadgets.vesica()
    start = Configuration({"p": (-1.0, 0.0), "q": (1.0, 0.0), "n": (0.0, math.sqrt(3))})
    with pytest.raises(TraceError, match="locally fixed"):
        trace_tense(net, "n", ("n", 0), (0.0, 0.1), 5, start)


def test_vesica_boundary_arcs_and_switch():
    net = gadgets.vesica()
    result = trace_boundary(net, "n", ("n", 0), (-1.0, 1.0), 201)
    left = lambda p: abs(np.hypot(p[0] + 1, p[1]) - 2)
    right = lambda p: abs(np.hypot(p[0] - 1, p[1]) - 2)
    assert residual_against_implicit_curve(result, lambda p: min(left(p), right(p))) < 1e-6
    assert all(s.active_cords for s in result.samples)
    first, last = result.samples[0], result.samples[-1]
    # upper arc left of centre lies on the circle around q, right of it on the circle around p
    assert first.active_cords == {1} and last.active_cords == {0}


def test_ellipse_boundary_is_the_tense_curve():
    net = gadgets.gardeners_ellipse()
    boundary = trace_boundary(net, "pencil", ("pencil", 0), (-1.9, 1.9), 60)
    tense = trace_tense(net, "pencil", ("pencil", 0), (-1.9, 1.9), 60, ellipse_top(-1.9))
    assert np.abs(boundary.points - tense.points).max() < 1e-6
    lower = trace_boundary(net, "pencil", ("pencil", 0), (-1.9, 1.9), 10, side=-1)
    assert all(s.point[1] < 0 for s in lower.samples)


def test_boundary_gaps():
    net = gadgets.string_compass()
    result = trace_boundary(net, "pencil", ("pencil", 0), (-2.0, 2.0), 5)
    assert result.gaps == [-2.0, 2.0]
    assert len(result.samples) == 3


def test_varying_dimension_transition():
    net = gadgets.varying_dimension()
    start = tense_start(net, ("x", 1), 0.5)
    result = trace_tense(net, "x", ("x", 1), (0.5, 0.0), 26, start)
    dims = [s.local_dimension for s in result.samples]
    assert dims[0] == 1 and dims[-1] == 2
    assert np.allclose(result.samples[-1].configuration["x"], (0.0, 0.0), atol=1e-9)


def test_local_dimension_of_a_circle():
    net = gadgets.string_compass()
    rho = Configuration({"c": (0.0, 0.0), "pencil": (1.0, 0.0)})
    assert local_tense_dimension(net, rho) == 1


def test_tracing_is_deterministic():
    net = gadgets.string_compass()
    a = tense_start(net, ("pencil", 0), 0.3)
    b = tense_start(net, ("pencil", 0), 0.3)
    assert a == b
