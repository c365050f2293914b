import io
import json
import shutil
import subprocess
import sys

import pytest

from cordage import gadgets
from cordage.cli import axis_index, run
from cordage.model import dumps, network_to_dict


def call(argv, stdin="", capsys=None, monkeypatch=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(capsys, monkeypatch):
    return lambda argv, stdin="": call(argv, stdin, capsys, monkeypatch)


def doc(net):
    return dumps(network_to_dict(net))


def test_gadget_then_trace_csv(cli):
    code, text, _ = cli(["gadget", "ellipse", "--foci", "-1,0", "1,0", "--length", "4"])
    assert code == 0
    code, out, err = cli(
        ["trace", "--node", "pencil", "--drive", "pencil.x", "--range", "-1.9:1.9", "--steps", "200", "--csv"], text
    )
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "parameter,x,y,active_cords" and len(rows) == 201
    assert "max_residual" in err
    for row in rows[1:]:
        _, x, y, _ = row.split(",")
        assert abs(float(x) ** 2 / 4 + float(y) ** 2 / 3 - 1) < 1e-6


def test_taut_clothesline(cli):
    code, out, _ = cli(["taut", "--assert"], doc(gadgets.clothesline()))
    assert code == 0 and json.loads(out)["networkTaut"] is True


def test_taut_assert_negative(cli):
    code, out, _ = cli(["taut", "--assert"], doc(gadgets.gardeners_ellipse()))
    assert code == 1 and json.loads(out)["networkTaut"] is False


def test_validate_consecutive_duplicate(cli):
    bad = json.dumps({"dimension": 2, "nodes": [{"id": "a", "anchor": [0, 0]}, {"id": "x"}],
                      "cords": [{"length": 1, "nodes": ["a", "x", "x"]}]})
    code, out, _ = cli(["validate"], bad)
    report = json.loads(out)
    assert code == 1 and report["violations"][0]["kind"] == "consecutive duplicate"


def test_validate_emit_round_trips(cli):
    text = doc(gadgets.adder()) + "\n"
    code, out, _ = cli(["validate", "--emit"], text)
    assert code == 0 and out == text


def test_usage_errors(cli):
    code, _, err = cli(["frobnicate"])
    assert code == 2 and "usage" in err
    code, _, err = cli(["taut", "--bogus"])
    assert code == 2 and "usage" in err
    code, _, err = cli(["gadget", "compass", "--length", "3"])
    assert code == 2


def test_solver_failure_exit_code(cli):
    # the driver of a vesica's tense point is pinned by the two circles
    code, _, err = cli(["trace", "--node", "n", "--drive", "n.x", "--range", "0:0.1", "--steps", "3"], doc(gadgets.vesica()))
    assert code == 3 and "solver failure" in err


def test_solve_reports_infeasibility(cli):
    tie = json.dumps({"dimension": 2, "nodes": [{"id": "a", "anchor": [0, -1]}, {"id": "b", "anchor": [0, 1]}],
                      "cords": [{"length": 1, "nodes": ["a", "b"]}]})
    code, out, _ = cli(["solve"], tie)
    assert code == 0 and json.loads(out)["feasible"] is False
    code, _, _ = cli(["solve", "--assert"], tie)
    assert code == 1


def test_relation_and_mobility(cli):
    code, out, _ = cli(["relation", "--nodes", "x,y"], doc(gadgets.scaler(0.5)))
    assert code == 0 and any("y[1]" in e["text"] for e in json.loads(out)["equations"])
    code, out, _ = cli(["mobility"], doc(gadgets.clothesline()))
    report = json.loads(out)
    assert report["degreesOfFreedom"] == 1 and report["mobility"]["x"] == 1


def test_static_and_firmness(cli):
    code, out, _ = cli(["static", "--assert"], doc(gadgets.y_network()))
    assert code == 0 and json.loads(out)["static"]
    code, out, err = cli(["firmness", "--csv", "--directions", "16"], doc(gadgets.firm_trio()[1]))
    assert code == 0 and out.splitlines()[0] == "epsilon,displacement" and "notFirm" in err


def test_seed_makes_runs_repeatable(cli):
    a = cli(["--seed", "4", "solve", "--tense"], doc(gadgets.vesica()))
    b = cli(["--seed", "4", "solve", "--tense"], doc(gadgets.vesica()))
    assert a == b


def test_linkage_round_trip(cli):
    code, out, _ = cli(["to-linkage"], doc(gadgets.string_compass()))
    assert code == 0
    code, back, _ = cli(["from-linkage"], out)
    assert code == 0 and back == doc(gadgets.string_compass()) + "\n"


def test_boundary_svg(cli, tmp_path):
    svg = tmp_path / "v.svg"
    code, out, _ = cli(
        ["boundary", "--node", "n", "--drive", "n.x", "--range", "-1:1", "--steps", "21", "--svg", str(svg)],
        doc(gadgets.vesica()),
    )
    assert code == 0 and len(json.loads(out)["points"]) == 21
    assert svg.read_text().count("<path") == 1


def test_render_rejects_3d(cli):
    code, _, err = cli(["render"], doc(gadgets.cartesian3d()))
    assert code == 1 and "--project" in err


def test_axis_names():
    assert axis_index("y", 2) == 1
    assert axis_index("c4", 5) == 4
    with pytest.raises(Exception):
        axis_index("z", 2)


@pytest.mark.skipif(shutil.which("cordage") is None, reason="console script not installed")
def test_console_script_pipeline():
    gadget = subprocess.run(["cordage", "gadget", "compass"], capture_output=True, text=True, check=True)
    traced = subprocess.run(
        ["cordage", "trace", "--node", "pencil", "--drive", "pencil.x", "--range", "-0.9:0.9", "--steps", "10", "--csv"],
        input=gadget.stdout, capture_output=True, text=True,
    )
    assert traced.returncode == 0 and len(traced.stdout.splitlines()) == 11
