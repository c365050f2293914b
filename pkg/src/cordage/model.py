"""Abstract cord networks, configurations and the cord-length constraint.

A network lives in R^d.  Each cord carries a length budget and an ordered
list of node ids; a configuration places every node so that anchored nodes
sit on their anchors and every cord's polygonal path fits in its budget.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

TOL_FEAS = 1e-9
TOL_TENSE = 1e-7

Point = tuple[float, ...]


class NetworkError(ValueError):
    """Raised for structurally invalid input to an operation."""


class IncompleteConfigurationError(NetworkError):
    pass


class InvalidConfigurationError(NetworkError):
    """A placement violates an anchor or a cord budget."""

    def __init__(self, message: str, cord: int | None = None, slack: float | None = None):
        super().__init__(message)
        self.cord = cord
        self.slack = slack


@dataclass(frozen=True)
class Node:
    id: str
    anchor: Point | None = None

    @property
    def anchored(self) -> bool:
        return self.anchor is not None


@dataclass(frozen=True)
class Cord:
    length: float
    nodes: tuple[str, ...]

    @property
    def is_tie(self) -> bool:
        return len(self.nodes) == 2

    def segments(self) -> list[tuple[str, str]]:
        return list(zip(self.nodes[:-1], self.nodes[1:]))


@dataclass(frozen=True)
class Network:
    """An abstract network: nodes (some anchored) and cords over them.

    Construction does not validate; use :func:`validate_network` for a
    report of everything that is wrong with a network.
    """

    dimension: int
    nodes: tuple[Node, ...]
    cords: tuple[Cord, ...]

    @classmethod
    def build(
        cls,
        dimension: int,
        anchors: Mapping[str, Sequence[float]] | None = None,
        free: Iterable[str] = (),
        cords: Iterable[tuple[float, Sequence[str]]] = (),
    ) -> "Network":
        """Convenience constructor from plain Python data."""
        nodes = [Node(k, tuple(float(c) for c in v)) for k, v in (anchors or {}).items()]
        nodes += [Node(k) for k in free]
        return cls(
            dimension,
            tuple(nodes),
            tuple(Cord(float(length), tuple(ns)) for length, ns in cords),
        )

    @property
    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise NetworkError(f"unknown node {node_id!r}")

    @property
    def anchors(self) -> dict[str, Point]:
        return {n.id: n.anchor for n in self.nodes if n.anchor is not None}

    @property
    def free_nodes(self) -> list[str]:
        return [n.id for n in self.nodes if n.anchor is None]

    def with_lengths(self, lengths: Sequence[float]) -> "Network":
        return Network(
            self.dimension,
            self.nodes,
            tuple(Cord(float(L), c.nodes) for L, c in zip(lengths, self.cords)),
        )


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    cord: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    nontrivial: bool

    @property
    def valid(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def validate_network(net: Network) -> ValidationReport:
    violations = []
    ids = net.node_ids
    known = set(ids)
    if len(known) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        violations.append(Violation("duplicate node", f"node ids repeated: {dup}"))
    if net.dimension < 1:
        violations.append(Violation("dimension", f"dimension must be positive, got {net.dimension}"))
    for n in net.nodes:
        if n.anchor is not None and len(n.anchor) != net.dimension:
            violations.append(
                Violation(
                    "anchor dimension",
                    f"anchor of {n.id!r} has {len(n.anchor)} coordinates, expected {net.dimension}",
                )
            )
    on_cord = set()
    for k, c in enumerate(net.cords):
        if not (c.length > 0) or not math.isfinite(c.length):
            violations.append(Violation("non-positive length", f"cord {k} has length {c.length}", k))
        if len(c.nodes) < 2:
            violations.append(Violation("short cord", f"cord {k} needs at least two nodes", k))
        for a, b in c.segments():
            if a == b:
                violations.append(
                    Violation("consecutive duplicate", f"cord {k} repeats {a!r} consecutively", k)
                )
        for nid in c.nodes:
            if nid not in known:
                violations.append(Violation("dangling node", f"cord {k} references unknown node {nid!r}", k))
        on_cord.update(c.nodes)

    anchored = [n for n in net.nodes if n.anchor is not None]
    nontrivial = (
        len(anchored) >= 1
        and len(anchored) < len(net.nodes)
        and all(n.id in on_cord for n in net.nodes)
    )
    return ValidationReport(tuple(violations), nontrivial)


@dataclass(frozen=True)
class Configuration:
    """A placement of nodes in R^d, stored as plain tuples."""

    placement: Mapping[str, Point] = field(default_factory=dict)

    def __getitem__(self, node_id: str) -> np.ndarray:
        try:
            return np.asarray(self.placement[node_id], dtype=float)
        except KeyError:
            raise IncompleteConfigurationError(f"no placement for node {node_id!r}") from None

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.placement

    @property
    def nodes(self) -> list[str]:
        return list(self.placement)

    @classmethod
    def from_arrays(cls, placement: Mapping[str, Sequence[float]]) -> "Configuration":
        return cls({k: tuple(float(c) for c in v) for k, v in placement.items()})

    def moved(self, node_id: str, point: Sequence[float]) -> "Configuration":
        p = dict(self.placement)
        p[node_id] = tuple(float(c) for c in point)
        return Configuration(p)

    def to_dict(self) -> dict:
        return {"placement": {k: list(v) for k, v in self.placement.items()}}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Configuration":
        return cls.from_arrays(data["placement"])


class Layout:
    """Index bookkeeping that maps a network onto flat numpy arrays.

    The optimization variables are the coordinates of the free nodes, in
    node order, flattened row-major.  Anchored coordinates are constants.
    """

    def __init__(self, net: Network):
        self.net = net
        self.d = net.dimension
        self.ids = net.node_ids
        self.index = {nid: i for i, nid in enumerate(self.ids)}
        self.free = np.array([i for i, n in enumerate(net.nodes) if n.anchor is None], dtype=int)
        self.free_ids = [self.ids[i] for i in self.free]
        self.free_pos = {nid: k for k, nid in enumerate(self.free_ids)}
        self.base = np.zeros((len(self.ids), self.d))
        for i, n in enumerate(net.nodes):
            if n.anchor is not None:
                self.base[i] = n.anchor
        a, b, owner = [], [], []
        for k, c in enumerate(net.cords):
            for u, v in c.segments():
                a.append(self.index[u])
                b.append(self.index[v])
                owner.append(k)
        self.seg_a = np.array(a, dtype=int)
        self.seg_b = np.array(b, dtype=int)
        self.seg_cord = np.array(owner, dtype=int)
        self.lengths = np.array([c.length for c in net.cords], dtype=float)
        self.n_vars = len(self.free) * self.d

    def var_index(self, node_id: str, axis: int) -> int:
        try:
            return self.free_pos[node_id] * self.d + axis
        except KeyError:
            raise NetworkError(f"{node_id!r} is not a free node") from None

    def positions(self, x: np.ndarray) -> np.ndarray:
        P = self.base.copy()
        if len(self.free):
            P[self.free] = np.asarray(x, dtype=float).reshape(-1, self.d)
        return P

    def flatten(self, config: Configuration) -> np.ndarray:
        return np.concatenate([config[nid] for nid in self.free_ids]) if self.free_ids else np.zeros(0)

    def configuration(self, x: np.ndarray) -> Configuration:
        P = self.positions(x)
        placement = {}
        for i, n in enumerate(self.net.nodes):
            placement[n.id] = n.anchor if n.anchor is not None else tuple(float(c) for c in P[i])
        return Configuration(placement)

    def segment_vectors(self, x: np.ndarray) -> np.ndarray:
        P = self.positions(x)
        return P[self.seg_b] - P[self.seg_a]

    def path_lengths(self, x: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(self.segment_vectors(x), axis=1)
        return np.bincount(self.seg_cord, weights=norms, minlength=len(self.lengths))

    def path_jacobian(self, x: np.ndarray) -> np.ndarray:
        """(Sub)gradient of every cord's path length w.r.t. the free coordinates.

        Zero-length segments contribute the zero subgradient.
        """
        diff = self.segment_vectors(x)
        norms = np.linalg.norm(diff, axis=1)
        unit = np.zeros_like(diff)
        nz = norms > 0
        unit[nz] = diff[nz] / norms[nz, None]
        full = np.zeros((len(self.lengths), len(self.ids), self.d))
        np.add.at(full, (self.seg_cord, self.seg_b), unit)
        np.add.at(full, (self.seg_cord, self.seg_a), -unit)
        return full[:, self.free, :].reshape(len(self.lengths), -1)

    def slacks(self, x: np.ndarray) -> np.ndarray:
        return self.lengths - self.path_lengths(x)


def _check_placed(config: Configuration, nodes: Iterable[str]) -> None:
    for nid in nodes:
        if nid not in config:
            raise IncompleteConfigurationError(f"incomplete configuration: {nid!r} is not placed")


def path_length(net: Network, config: Configuration, cord: Cord | int) -> float:
    c = net.cords[cord] if isinstance(cord, int) else cord
    _check_placed(config, c.nodes)
    return float(sum(np.linalg.norm(config[v] - config[u]) for u, v in c.segments()))


@dataclass(frozen=True)
class CordSlack:
    cord: int
    path_length: float
    slack: float
    tense: bool


@dataclass(frozen=True)
class SlackReport:
    cords: tuple[CordSlack, ...]

    @property
    def tense(self) -> bool:
        return all(c.tense for c in self.cords)

    @property
    def slacks(self) -> list[float]:
        return [c.slack for c in self.cords]


def check_anchors(net: Network, config: Configuration) -> None:
    _check_placed(config, net.node_ids)
    for nid, a in net.anchors.items():
        if tuple(config.placement[nid]) != tuple(a):
            raise InvalidConfigurationError(f"anchored node {nid!r} is off its anchor")


def slack_report(
    net: Network,
    config: Configuration,
    tol_tense: float = TOL_TENSE,
    tol_feas: float = TOL_FEAS,
) -> SlackReport:
    check_anchors(net, config)
    records = []
    for k, c in enumerate(net.cords):
        length = path_length(net, config, c)
        slack = c.length - length
        if slack < -tol_feas:
            raise InvalidConfigurationError(
                f"cord {k} exceeds its length by {-slack:.3e}", cord=k, slack=slack
            )
        records.append(CordSlack(k, length, slack, slack <= tol_tense))
    return SlackReport(tuple(records))


def is_configuration(net: Network, config: Configuration, tol_feas: float = TOL_FEAS) -> bool:
    try:
        slack_report(net, config, tol_feas=tol_feas)
    except NetworkError:
        return False
    return set(config.nodes) == set(net.node_ids)


def max_violation(net: Network, config: Configuration) -> float:
    """Largest amount by which any cord exceeds its budget (0 if none)."""
    worst = 0.0
    for c in net.cords:
        worst = max(worst, path_length(net, config, c) - c.length)
    return worst


def _combine(rho: Configuration, sigma: Configuration, t: float) -> Configuration:
    if set(rho.nodes) != set(sigma.nodes):
        raise NetworkError("configurations place different node sets")
    out = {}
    for nid, p in rho.placement.items():
        q = sigma.placement[nid]
        if tuple(p) == tuple(q):
            # keeps anchors bit-exact
            out[nid] = tuple(p)
        else:
            out[nid] = tuple(float(v) for v in (1 - t) * np.asarray(p) + t * np.asarray(q))
    return Configuration(out)


def interpolate(rho: Configuration, sigma: Configuration, t: float) -> Configuration:
    """Pointwise ``(1 - t) * rho + t * sigma`` for ``t`` in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise NetworkError(f"interpolation parameter {t} outside [0, 1]")
    if t == 0.0:
        return Configuration(dict(rho.placement))
    if t == 1.0:
        return Configuration(dict(sigma.placement))
    return _combine(rho, sigma, t)


def extrapolate(rho: Configuration, sigma: Configuration, t: float) -> Configuration:
    """``t * rho + (1 - t) * sigma`` for any real ``t``."""
    return _combine(sigma, rho, t)


@dataclass(frozen=True)
class Adjacency:
    a: str
    b: str
    cord: int
    segment: int


def adjacent_pairs(net: Network) -> list[Adjacency]:
    return [
        Adjacency(u, v, k, j)
        for k, c in enumerate(net.cords)
        for j, (u, v) in enumerate(c.segments())
    ]


def neighbors(net: Network) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {nid: set() for nid in net.node_ids}
    for adj in adjacent_pairs(net):
        out[adj.a].add(adj.b)
        out[adj.b].add(adj.a)
    return out


# -- JSON documents ---------------------------------------------------------


def network_to_dict(net: Network) -> dict:
    nodes = []
    for n in net.nodes:
        entry: dict = {"id": n.id}
        if n.anchor is not None:
            entry["anchor"] = list(n.anchor)
        nodes.append(entry)
    return {
        "dimension": net.dimension,
        "nodes": nodes,
        "cords": [{"length": c.length, "nodes": list(c.nodes)} for c in net.cords],
    }


def network_from_dict(data: Mapping) -> Network:
    try:
        d = int(data["dimension"])
        nodes = tuple(
            Node(str(n["id"]), None if n.get("anchor") is None else tuple(float(v) for v in n["anchor"]))
            for n in data["nodes"]
        )
        cords = tuple(
            Cord(float(c["length"]), tuple(str(v) for v in c["nodes"])) for c in data["cords"]
        )
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed network document: {exc}") from exc
    return Network(d, nodes, cords)


def dumps(obj: dict) -> str:
    """Canonical JSON text: key order preserved, shortest round-trip floats."""
    return json.dumps(obj, indent=2)


def load_network(text: str) -> Network:
    return network_from_dict(json.loads(text))
