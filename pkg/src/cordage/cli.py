"""Command-line front end.

Every command reads one JSON document (a file path, or ``-`` for stdin)
and writes a JSON report to stdout unless told otherwise.  Exit codes:
0 success, 1 a negative answer under ``--assert`` or an invalid network,
2 usage error, 3 solver failure.  ``CORDAGE_LOG`` sets the log level.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import sys
from typing import Sequence

import numpy as np

from . import firmness, gadgets, linkage, model, solver, taut, tracer
from .model import Configuration, Network, NetworkError
from .svg import render_svg

log = logging.getLogger("cordage")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3
AXIS_NAMES = "xyz"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept "-1,0" and "-1.9:1.9" as values rather than options
        self._negative_number_matcher = re.compile(r"^-\.?\d[\d.,:eE+-]*$")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument helpers ---------------------------------------------------------


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _interval(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    return lo, hi


def _names(text: str) -> list[str]:
    return [v for v in text.split(",") if v]


def axis_index(name: str, d: int) -> int:
    """``x, y, z`` for dimension up to 3, ``c0 .. c{d-1}`` otherwise."""
    if d <= 3 and len(name) == 1 and name in AXIS_NAMES[:d]:
        return AXIS_NAMES.index(name)
    m = re.fullmatch(r"c(\d+)", name)
    if d > 3 and m and int(m.group(1)) < d:
        return int(m.group(1))
    raise UsageError(f"bad axis {name!r} for dimension {d}")


def node_axis(text: str, net: Network) -> tuple[str, int]:
    node, _, axis = text.rpartition(".")
    if not node:
        raise UsageError(f"expected node.axis, got {text!r}")
    net.node(node)
    return node, axis_index(axis, net.dimension)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_json(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise NetworkError(f"{path}: not JSON ({exc})") from None


def _load_network(path: str) -> Network:
    return model.network_from_dict(_load_json(path))


def _finite(v):
    return v if isinstance(v, (int, str, bool)) or v is None or math.isfinite(v) else None


def _emit(obj) -> None:
    sys.stdout.write(model.dumps(obj) + "\n")


def _placement(config: Configuration) -> dict:
    return {k: list(v) for k, v in config.placement.items()}


# -- commands ----------------------------------------------------------------


def cmd_validate(args, opts):
    net = _load_network(args.input)
    report = model.validate_network(net)
    if args.emit and report.valid:
        _emit(model.network_to_dict(net))
    else:
        _emit(
            {
                "valid": report.valid,
                "nontrivial": report.nontrivial,
                "violations": [{"kind": v.kind, "message": v.message, "cord": v.cord} for v in report.violations],
            }
        )
    return EXIT_OK if report.valid else EXIT_NEGATIVE


def cmd_solve(args, opts):
    net = _load_network(args.input)
    if args.tense:
        config = solver.find_tense_configuration(net, opts)
        _emit({"found": config is not None, **({"placement": _placement(config)} if config else {})})
        return EXIT_NEGATIVE if args.assert_ and config is None else EXIT_OK
    try:
        config = solver.find_configuration(net, opts)
    except solver.InfeasibleError as exc:
        _emit({"feasible": False, "violation": exc.violation})
        return EXIT_NEGATIVE if args.assert_ else EXIT_OK
    _emit({"feasible": True, "placement": _placement(config)})
    return EXIT_OK


def cmd_taut(args, opts):
    net = _load_network(args.input)
    report = solver.taut_report(net, opts)
    _emit(
        {
            "networkTaut": report.network_taut,
            "vacuouslyTaut": report.vacuously_taut,
            "cords": [
                {"cord": r.cord, "maxSlack": r.max_slack, "limit": r.limit, "taut": r.taut} for r in report.cords
            ],
        }
    )
    return EXIT_NEGATIVE if args.assert_ and not report.network_taut else EXIT_OK


def cmd_static(args, opts):
    net = _load_network(args.input)
    report = solver.is_static(net, opts)
    _emit({"static": report.static, "ranges": {k: [list(r) for r in v] for k, v in report.ranges.items()}})
    return EXIT_NEGATIVE if args.assert_ and not report.static else EXIT_OK


def _model(args, opts) -> taut.LinearModel:
    return taut.build_linear_model(_load_network(args.input), opts=opts)


def cmd_mobility(args, opts):
    m = _model(args, opts)
    laws = taut.check_mobility_laws(m.network, m)
    _emit(
        {
            "degreesOfFreedom": m.degrees_of_freedom,
            "mobility": taut.mobility_report(m).per_node,
            "laws": {
                "adjacent": laws.adjacent_ok,
                "collinear": laws.collinear,
                "literalCollinear": laws.literal_collinear,
                "adjacentDifferences": [list(t) for t in laws.adjacent_differences],
                "collinearityFailures": [list(t) for t in laws.collinearity_failures],
                "literalFailures": [list(t) for t in laws.literal_failures],
            },
        }
    )
    return EXIT_NEGATIVE if args.assert_ and not laws.passed else EXIT_OK


def cmd_relation(args, opts):
    m = _model(args, opts)
    equations = taut.affine_relation(m, args.nodes)
    _emit(
        {
            "nodes": args.nodes,
            "equations": [
                {
                    "coefficients": [{"node": n, "axis": a, "value": c} for (n, a), c in eq.coefficients.items()],
                    "constant": eq.constant,
                    "text": str(eq),
                }
                for eq in equations
            ],
        }
    )
    return EXIT_OK


def _write_trace(args, net: Network, result: tracer.TraceResult, label: str) -> None:
    summary = (
        f"{label}: samples={len(result.samples)} max_residual={result.max_residual:.3e} "
        f"complete={result.complete} gaps={len(result.gaps)} discontinuities={len(result.discontinuities)}"
    )
    if args.csv:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["parameter", *AXIS_NAMES[: net.dimension], "active_cords"] if net.dimension <= 3 else
                   ["parameter", *(f"c{i}" for i in range(net.dimension)), "active_cords"])
        for s in result.samples:
            w.writerow([repr(s.parameter), *(repr(float(v)) for v in s.point), ";".join(map(str, sorted(s.active_cords)))])
        sys.stdout.write(out.getvalue())
        print(summary, file=sys.stderr)
    else:
        _emit(
            {
                "parameters": result.parameters.tolist(),
                "points": result.points.tolist(),
                "activeCords": [sorted(s.active_cords) for s in result.samples],
                "localDimension": [s.local_dimension for s in result.samples],
                "maxResidual": result.max_residual,
                "complete": result.complete,
                "gaps": result.gaps,
                "discontinuities": result.discontinuities,
                "lipschitz": result.lipschitz,
            }
        )
    if args.svg:
        config = result.samples[0].configuration if result.samples else None
        with open(args.svg, "w") as fh:
            fh.write(render_svg(net, config, [result.points] if result.samples else [], _axes(args)))


def _axes(args):
    return tuple(args.project) if getattr(args, "project", None) else None


def cmd_trace(args, opts):
    net = _load_network(args.input)
    driver = node_axis(args.drive, net)
    net.node(args.node)
    if args.start:
        start = Configuration.from_dict(_load_json(args.start))
    else:
        start = tracer.tense_start(net, driver, args.range[0], opts)
    result = tracer.trace_tense(net, args.node, driver, args.range, args.steps, start, opts)
    _write_trace(args, net, result, "trace")
    return EXIT_NEGATIVE if args.assert_ and not result.complete else EXIT_OK


def cmd_boundary(args, opts):
    net = _load_network(args.input)
    driver = node_axis(args.drive, net)
    net.node(args.node)
    side = 1 if args.side == "upper" else -1
    result = tracer.trace_boundary(net, args.node, driver, args.range, args.steps, side, opts)
    _write_trace(args, net, result, "boundary")
    return EXIT_OK


def cmd_firmness(args, opts):
    net = _load_network(args.input)
    est = firmness.firmness_estimate(net, opts, args.directions, args.nodes, args.eps or firmness.EPSILONS)
    if args.csv:
        print("epsilon,displacement")
        for e, v in zip(est.epsilons, est.displacements):
            print(f"{e!r},{v!r}")
        print(f"exponent={est.exponent:.4f} k={est.k:.4g} classification={est.classification}", file=sys.stderr)
    else:
        _emit(
            {
                "epsilons": list(est.epsilons),
                "displacements": list(est.displacements),
                "exponent": _finite(est.exponent),
                "k": est.k,
                "classification": est.classification,
            }
        )
    return EXIT_NEGATIVE if args.assert_ and est.classification != "firm" else EXIT_OK


#: gadget flag -> constructor keyword, per gadget
GADGET_FLAGS = {
    "y": {"braced": "braced"},
    "clothesline": {"foci": ("p", "q")},
    "adder": {"span": "span", "inputs": "inputs"},
    "scaler": {"factor": "m", "span": "span", "at": "x"},
    "cartesian2d": {"bounds": ("bounds",)},
    "cartesian3d": {"bounds": ("bounds",)},
    "higher-mobility": {"size": "size"},
    "ellipse": {"foci": ("p", "q"), "length": "length"},
    "compass": {"center": "c", "radius": "r"},
    "vesica": {"foci": ("p", "q"), "lengths": ("l1", "l2")},
    "varying-dimension": {},
    "firm-a": {},
    "firm-b": {},
    "firm-c": {},
}


def gadget_kwargs(name: str, args) -> dict:
    allowed = GADGET_FLAGS[name]
    kwargs = {}
    for flag in ("braced", "foci", "span", "inputs", "factor", "at", "bounds", "size", "length", "center", "radius", "lengths"):
        value = getattr(args, flag)
        if value is None or value is False:
            continue
        if flag not in allowed:
            raise UsageError(f"gadget {name!r} does not take --{flag}")
        key = allowed[flag]
        if flag == "bounds":
            kwargs["bounds"] = tuple(value)
        elif flag == "inputs":
            kwargs["inputs"] = tuple(value)
        elif isinstance(key, tuple):
            if len(value) != len(key):
                raise UsageError(f"--{flag} takes {len(key)} values")
            kwargs.update(zip(key, value))
        else:
            kwargs[key] = value
    if name == "scaler" and "m" not in kwargs:
        raise UsageError("scaler needs --factor")
    return kwargs


def cmd_gadget(args, opts):
    if args.name not in gadgets.GADGETS:
        raise UsageError(f"unknown gadget {args.name!r}; choose from {', '.join(gadgets.GADGETS)}")
    net = gadgets.GadgetSpec(args.name, gadget_kwargs(args.name, args), args.prefix or "").build()
    _emit(model.network_to_dict(net))
    return EXIT_OK


def cmd_to_linkage(args, opts):
    net = _load_network(args.input)
    if all(c.is_tie for c in net.cords):
        lk = linkage.linkage_from_network(net)
    else:
        hint = solver.find_tense_configuration(net, opts)
        if hint is None:
            raise solver.ConvergenceError("no tense configuration to place the cord gadgets")
        lk = linkage.linkage_from_cords(net, hint)
    _emit(linkage.linkage_to_dict(lk))
    return EXIT_OK


def cmd_from_linkage(args, opts):
    lk = linkage.linkage_from_dict(_load_json(args.input))
    if args.expand_sliders:
        lk, skipped = linkage.expand_sliders(lk)
        if skipped:
            names = ", ".join(f"{s.node} on {s.a}-{s.b}" for s in skipped)
            raise linkage.LinkageError(f"sliders without a carrying link cannot be expanded: {names}")
    _emit(model.network_to_dict(linkage.network_from_linkage(lk)))
    return EXIT_OK


def _read_trace_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return np.zeros((0, 2))
    header, body = rows[0], rows[1:]
    d = len(header) - 2
    return np.array([[float(v) for v in r[1 : 1 + d]] for r in body]).reshape(-1, d)


def cmd_render(args, opts):
    text = _read(args.input)
    traces = [_read_trace_csv(_read(p)) for p in args.trace]
    net = config = None
    if text.lstrip().startswith("{"):
        net = model.network_from_dict(json.loads(text))
        if args.placement:
            config = Configuration.from_dict(_load_json(args.placement))
        else:
            config = solver.find_configuration(net, opts)
    else:
        traces.insert(0, _read_trace_csv(text))
    svg = render_svg(net, config, traces, _axes(args))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cordage", description="Analyse networks of cords: feasibility, tautness, curves, linkages.")
    p.add_argument("--seed", type=int, default=0, help="seed for every randomized step (default 0)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help, network=True):
        sp = sub.add_parser(name, help=help)
        if network:
            sp.add_argument("input", nargs="?", default="-", help="JSON document, '-' for stdin")
        sp.set_defaults(func=func)
        return sp

    def asserting(sp):
        sp.add_argument("--assert", dest="assert_", action="store_true", help="exit 1 on a negative answer")

    sp = command("validate", cmd_validate, "check a network document")
    sp.add_argument("--emit", action="store_true", help="print the canonical network instead of the report")
    sp = command("solve", cmd_solve, "find a configuration")
    sp.add_argument("--tense", action="store_true", help="look for a configuration with every cord tense")
    asserting(sp)
    asserting(command("taut", cmd_taut, "largest slack of each cord"))
    asserting(command("static", cmd_static, "coordinate ranges of free nodes"))
    asserting(command("mobility", cmd_mobility, "degrees of freedom and per-node mobility of a taut network"))
    sp = command("relation", cmd_relation, "affine relations among nodes of a taut network")
    sp.add_argument("--nodes", type=_names, required=True, help="comma-separated node ids")

    for name, func, help in (
        ("trace", cmd_trace, "follow tense configurations as one coordinate is driven"),
        ("boundary", cmd_boundary, "boundary arc of a node's region"),
    ):
        sp = command(name, func, help)
        sp.add_argument("--node", required=True, help="node whose position is recorded")
        sp.add_argument("--drive", required=True, help="driven coordinate as node.axis")
        sp.add_argument("--range", type=_interval, required=True, help="driver interval lo:hi")
        sp.add_argument("--steps", type=int, default=200)
        sp.add_argument("--csv", action="store_true", help="CSV rows instead of JSON")
        sp.add_argument("--svg", metavar="PATH", help="also write a figure")
        sp.add_argument("--project", type=_axes_arg, help="two axes to draw, e.g. x,y")
        if name == "trace":
            sp.add_argument("--start", metavar="PATH", help="tense starting configuration JSON")
            asserting(sp)
        else:
            sp.add_argument("--side", choices=("upper", "lower"), default="upper")

    sp = command("firmness", cmd_firmness, "displacement under cord expansion and its exponent")
    sp.add_argument("--nodes", type=_names, help="free nodes to probe (default all)")
    sp.add_argument("--directions", type=int, help="directions sampled per node")
    sp.add_argument("--eps", type=lambda s: list(_floats(s)), help="comma-separated expansions")
    sp.add_argument("--csv", action="store_true")
    asserting(sp)

    sp = command("gadget", cmd_gadget, "print a catalog gadget as JSON", network=False)
    sp.add_argument("name", help=", ".join(gadgets.GADGETS))
    sp.add_argument("--prefix")
    sp.add_argument("--braced", action="store_true")
    sp.add_argument("--foci", type=_floats, nargs=2, metavar="X,Y")
    sp.add_argument("--length", type=float)
    sp.add_argument("--lengths", type=float, nargs=2)
    sp.add_argument("--center", type=_floats)
    sp.add_argument("--radius", type=float)
    sp.add_argument("--span", type=float)
    sp.add_argument("--inputs", type=float, nargs=2)
    sp.add_argument("--factor", type=float)
    sp.add_argument("--at", type=float, help="scaler input position")
    sp.add_argument("--size", type=float)
    sp.add_argument("--bounds", type=_floats, nargs=2, metavar="LO")

    command("to-linkage", cmd_to_linkage, "linkage whose realizations are the tense configurations")
    sp = command("from-linkage", cmd_from_linkage, "network of ties from a linkage document")
    sp.add_argument("--expand-sliders", action="store_true", help="replace sliders by Peaucellier cells first")

    sp = command("render", cmd_render, "SVG of a network (JSON) or a trace (CSV)")
    sp.add_argument("--placement", metavar="PATH", help="configuration JSON (default: solve)")
    sp.add_argument("--trace", metavar="CSV", action="append", default=[], help="overlay a trace")
    sp.add_argument("--project", type=_axes_arg, help="two axes to draw, e.g. x,z")
    sp.add_argument("-o", "--output", metavar="PATH")
    return p


def _axes_arg(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two axes")
    out = []
    for a in parts:
        if a in AXIS_NAMES:
            out.append(AXIS_NAMES.index(a))
        elif re.fullmatch(r"c\d+", a):
            out.append(int(a[1:]))
        else:
            raise argparse.ArgumentTypeError(f"bad axis {a!r}")
    return tuple(out)


def run(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("CORDAGE_LOG", "WARNING").upper(), stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    opts = solver.SolveOptions(seed=args.seed)
    try:
        return args.func(args, opts)
    except UsageError as exc:
        print(f"cordage: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (solver.ConvergenceError, tracer.TraceError, solver.InfeasibleError) as exc:
        print(f"cordage: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (NetworkError, OSError) as exc:
        print(f"cordage: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
