"""Constructors for named networks, plus prefix-and-weld composition.

Taut gadgets are assembled from two bricks:

* a *rail*: cord ``(a, n, b)`` of length ``|ab|`` between anchors, which
  pins ``n`` to the segment ``ab``;
* a *copier*: two crossing cords ``(n1, b1, a2, n2)`` and
  ``(n1, a1, b2, n2)`` between rails of equal length.  Their budgets force
  the arc parameters ``|a1 n1|`` and ``|a2 n2|`` to agree, so one rail's
  node copies the other's position.

A planar *frame* (Cartesian brick) puts trackers on two adjacent sides of
a rectangle, copies them to the opposite sides, and places a product node
on the two moving segments joining the copies: the product sits at the
Cartesian pair of the trackers' arc parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .model import Cord, Network, NetworkError, Node

SQRT3 = math.sqrt(3.0)


class _Builder:
    def __init__(self, dimension: int):
        self.d = dimension
        self.anchors: dict[str, np.ndarray] = {}
        self.order: list[str] = []
        self.cords: list[Cord] = []

    def anchor(self, name: str, point) -> str:
        p = np.asarray(point, dtype=float)
        if name in self.anchors or name in self.order:
            raise NetworkError(f"node {name!r} defined twice")
        self.anchors[name] = p
        self.order.append(name)
        return name

    def free(self, name: str) -> str:
        if name in self.order:
            raise NetworkError(f"node {name!r} defined twice")
        self.order.append(name)
        return name

    def dist(self, a: str, b: str) -> float:
        return float(np.linalg.norm(self.anchors[a] - self.anchors[b]))

    def cord(self, length: float, *nodes: str) -> None:
        self.cords.append(Cord(float(length), tuple(nodes)))

    def rail(self, a: str, b: str, node: str) -> tuple[str, str, str]:
        self.cord(self.dist(a, b), a, node, b)
        return (a, b, node)

    def copier(self, r1: tuple[str, str, str], r2: tuple[str, str, str]) -> None:
        a1, b1, n1 = r1
        a2, b2, n2 = r2
        w = self.dist(a1, b1)
        if abs(w - self.dist(a2, b2)) > 1e-12 * max(1.0, w):
            raise NetworkError("copier rails must have equal length")
        self.cord(w + self.dist(b1, a2), n1, b1, a2, n2)
        self.cord(w + self.dist(a1, b2), n1, a1, b2, n2)

    def network(self) -> Network:
        nodes = tuple(
            Node(n, tuple(float(c) for c in self.anchors[n])) if n in self.anchors else Node(n)
            for n in self.order
        )
        return Network(self.d, nodes, tuple(self.cords))


@dataclass
class _Frame:
    u_rail: tuple[str, str, str]
    v_rail: tuple[str, str, str]
    product: str


def _frame(b: _Builder, pre: str, origin, u, v, w: float, h: float, names: Mapping[str, str] = {}) -> _Frame:
    origin = np.asarray(origin, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    o = b.anchor(pre + "o", origin)
    ou = b.anchor(pre + "u", origin + w * u)
    ov = b.anchor(pre + "v", origin + h * v)
    ouv = b.anchor(pre + "uv", origin + w * u + h * v)
    nu = b.free(names.get("u", pre + "nu"))
    nut = b.free(names.get("ut", pre + "nut"))
    nv = b.free(names.get("v", pre + "nv"))
    nvr = b.free(names.get("vr", pre + "nvr"))
    prod = b.free(names.get("p", pre + "p"))
    bottom = b.rail(o, ou, nu)
    top = b.rail(ov, ouv, nut)
    left = b.rail(o, ov, nv)
    right = b.rail(ou, ouv, nvr)
    b.copier(bottom, top)
    b.copier(left, right)
    b.cord(h, nu, prod, nut)
    b.cord(w, nv, prod, nvr)
    return _Frame(bottom, left, prod)


def _point(p, d: int = 2) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (d,):
        raise NetworkError(f"expected a point with {d} coordinates, got {p!r}")
    return arr


# -- taut gadgets -------------------------------------------------------------


def y_network(braced: bool = False) -> Network:
    """Unit equilateral triangle of anchors tied to a centre node ``x``.

    ``braced=True`` adds the slack cord of length 2 between ``a`` and ``b``.
    """
    b = _Builder(2)
    b.anchor("a", (0.0, 0.0))
    b.anchor("b", (1.0, 0.0))
    b.anchor("c", (0.5, SQRT3 / 2))
    b.free("x")
    for a in ("a", "b", "c"):
        b.cord(SQRT3 / 3, a, "x")
    if braced:
        b.cord(2.0, "a", "b")
    return b.network()


def clothesline(p=(0.0, 0.0), q=(4.0, 0.0)) -> Network:
    """Cords ``(x, p, y)`` and ``(y, q, x)`` of length ``|pq|``; ``y`` mirrors ``x``."""
    p, q = _point(p, len(p)), _point(q, len(q))
    if p.shape != q.shape:
        raise NetworkError("p and q must have the same dimension")
    L = float(np.linalg.norm(q - p))
    if L == 0.0:
        raise NetworkError("clothesline needs distinct anchors")
    b = _Builder(len(p))
    b.anchor("p", p)
    b.anchor("q", q)
    b.free("x")
    b.free("y")
    b.cord(L, "x", "p", "y")
    b.cord(L, "y", "q", "x")
    return b.network()


def adder(span: float = 1.0, inputs: tuple[float, float] | None = None) -> Network:
    """Vertical positions satisfy ``s = s1 + s2`` over ``s1, s2 >= 0, s1 + s2 <= span``.

    Four vertical rails of height ``span`` at x = 0, span, 2 span, 3 span
    carry ``s1``, ``s2``, an averaging node ``avg`` and the output ``s``.
    One cord pair wraps around ``avg`` from above and below with ``s1`` and
    ``s2`` at its ends, forcing ``2 avg = s1 + s2``; a second pair with
    ``avg`` doubled and ``s`` at one end forces ``s = 2 avg``.  Passing
    ``inputs`` anchors ``s1`` and ``s2`` at those heights.
    """
    if not span > 0:
        raise NetworkError("span must be positive")
    H = float(span)
    b = _Builder(2)
    xs = {"1": 0.0, "2": H, "m": 2 * H, "s": 3 * H}
    for k, x in xs.items():
        b.anchor("b" + k, (x, 0.0))
        b.anchor("t" + k, (x, H))
    if inputs is None:
        b.free("s1")
        b.free("s2")
    else:
        y1, y2 = inputs
        if not (0 <= y1 and 0 <= y2 and y1 + y2 <= H):
            raise NetworkError("inputs outside the adder's operating range")
        b.anchor("s1", (0.0, float(y1)))
        b.anchor("s2", (H, float(y2)))
    b.free("avg")
    b.free("s")
    for k, n in (("1", "s1"), ("2", "s2"), ("m", "avg"), ("s", "s")):
        b.cord(H, "b" + k, n, "t" + k)
    b.cord(2 * H + b.dist("t1", "bm") + b.dist("bm", "t2"), "s1", "t1", "bm", "avg", "bm", "t2", "s2")
    b.cord(2 * H + b.dist("b1", "tm") + b.dist("tm", "b2"), "s1", "b1", "tm", "avg", "tm", "b2", "s2")
    b.cord(H + b.dist("ts", "bm"), "s", "ts", "bm", "avg", "bm")
    b.cord(2 * H + b.dist("bs", "tm"), "s", "bs", "tm", "avg", "tm")
    return b.network()


def cartesian2d(bounds=((0.0, 0.0), (1.0, 1.0))) -> Network:
    """Product node ``x`` sits at (x1's abscissa, x2's ordinate).

    ``x1`` rides the bottom side of the rectangle, ``x2`` the left side;
    ``x1t`` and ``x2r`` are their copies on the top and right sides.
    """
    lo, hi = np.asarray(bounds[0], float), np.asarray(bounds[1], float)
    w, h = hi - lo
    if not (w > 0 and h > 0):
        raise NetworkError("bounds must have positive extents")
    b = _Builder(2)
    _frame(b, "", lo, (1, 0), (0, 1), w, h, {"u": "x1", "ut": "x1t", "v": "x2", "vr": "x2r", "p": "x"})
    return b.network()


def cartesian3d(bounds=((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))) -> Network:
    """Three-dimensional product node ``x`` at (x1, x2, x3).

    Two planar frames in the floor and ceiling (z = const) give points
    above and below ``x``; two frames in the front and back walls
    (y = const) give points in front of and behind it.  ``x`` rides both
    connecting segments, which are parallel to the z and y axes.  Copier
    pairs keep all frames reading the same three coordinates.
    """
    lo, hi = np.asarray(bounds[0], float), np.asarray(bounds[1], float)
    W, H, D = hi - lo
    if not (W > 0 and H > 0 and D > 0):
        raise NetworkError("bounds must have positive extents")
    ex, ey, ez = np.eye(3)
    b = _Builder(3)
    floor = _frame(b, "floor.", lo, ex, ey, W, H, {"u": "x1", "v": "x2"})
    ceil = _frame(b, "ceil.", lo + D * ez, ex, ey, W, H)
    front = _frame(b, "front.", lo, ex, ez, W, D, {"v": "x3"})
    back = _frame(b, "back.", lo + H * ey, ex, ez, W, D)
    for fr in (ceil, front, back):
        b.copier(floor.u_rail, fr.u_rail)
    b.copier(floor.v_rail, ceil.v_rail)
    b.copier(front.v_rail, back.v_rail)
    b.free("x")
    b.cord(D, floor.product, "x", ceil.product)
    b.cord(H, front.product, "x", back.product)
    return b.network()


def scaler(m: float, span: float = 1.0, x: float | None = None) -> Network:
    """Output ``y`` (left side, vertical) equals ``m`` times input ``x`` (bottom side).

    A square Cartesian frame of side ``span`` whose product node ``p`` is
    held on the rail from the corner ``o`` to an anchor ``e`` on the line of
    slope ``m``.  ``x=...`` anchors the input.
    """
    if not (m > 0 and math.isfinite(m)):
        raise NetworkError(f"scaler slope must be a positive finite number, got {m}")
    if not span > 0:
        raise NetworkError("span must be positive")
    W = float(span)
    b = _Builder(2)
    names = {"u": "x", "ut": "xt", "v": "y", "vr": "yr", "p": "p"}
    if x is not None:
        if not (0 <= x <= W and m * x <= W):
            raise NetworkError("input outside the scaler's operating range")
    fr = _frame(b, "", (0.0, 0.0), (1, 0), (0, 1), W, W, names)
    e = (W, m * W) if m <= 1 else (W / m, W)
    b.anchor("e", e)
    b.rail("o", "e", fr.product)
    net = b.network()
    if x is not None:
        net = pin(net, {"x": (float(x), 0.0)})
    return net


def pin(net: Network, anchors: Mapping[str, Sequence[float]]) -> Network:
    """Anchor the named free nodes at the given points."""
    nodes = []
    for n in net.nodes:
        if n.id in anchors:
            nodes.append(Node(n.id, tuple(float(c) for c in anchors[n.id])))
        else:
            nodes.append(n)
    missing = set(anchors) - set(net.node_ids)
    if missing:
        raise NetworkError(f"unknown nodes {sorted(missing)}")
    return Network(net.dimension, tuple(nodes), net.cords)


def higher_mobility_example(size: float = 2.0) -> Network:
    """Node ``w`` of mobility 1 whose neighbours all have mobility 2.

    Master coordinates (X, Y) are read by nodes ``x`` and ``y``.  Four
    frames produce ``u = (X-1, Y)``, ``u' = (X+1, Y)``, ``v = (Y, X-1)``
    and ``v' = (Y, X+1)``; cords of length 2 through ``w`` join ``u, u'``
    and ``v, v'``, so ``w = (Y, Y)``.  Feasible while ``|X - Y| <= 1``.
    """
    S = float(size)
    b = _Builder(2)
    fu = _frame(b, "U.", (-1.0, 0.0), (1, 0), (0, 1), S, S, {"u": "x", "v": "y", "p": "u"})
    fu2 = _frame(b, "U'.", (1.0, 0.0), (1, 0), (0, 1), S, S, {"p": "u'"})
    fv = _frame(b, "V.", (0.0, -1.0), (1, 0), (0, 1), S, S, {"p": "v"})
    fv2 = _frame(b, "V'.", (0.0, 1.0), (1, 0), (0, 1), S, S, {"p": "v'"})
    b.copier(fu.u_rail, fu2.u_rail)
    b.copier(fu.v_rail, fu2.v_rail)
    for fr in (fv, fv2):
        b.copier(fu.v_rail, fr.u_rail)
        b.copier(fu.u_rail, fr.v_rail)
    b.free("w")
    b.cord(2.0, "u", "w", "u'")
    b.cord(2.0, "v", "w", "v'")
    return b.network()


# -- conditionally tense gadgets ---------------------------------------------


def gardeners_ellipse(p=(-1.0, 0.0), q=(1.0, 0.0), length: float = 4.0) -> Network:
    """Cord ``(p, pencil, q)``; with the cord tense the pencil is on the ellipse with foci p, q."""
    p, q = _point(p), _point(q)
    b = _Builder(2)
    b.anchor("p", p)
    b.anchor("q", q)
    b.free("pencil")
    b.cord(length, "p", "pencil", "q")
    return b.network()


def string_compass(c=(0.0, 0.0), r: float = 1.0) -> Network:
    if not r > 0:
        raise NetworkError("radius must be positive")
    b = _Builder(2)
    b.anchor("c", _point(c))
    b.free("pencil")
    b.cord(r, "c", "pencil")
    return b.network()


def vesica(p=(-1.0, 0.0), q=(1.0, 0.0), l1: float = 2.0, l2: float = 2.0) -> Network:
    """Ties ``(p, n)`` and ``(q, n)``; config space is the lens where two discs overlap."""
    b = _Builder(2)
    b.anchor("p", _point(p))
    b.anchor("q", _point(q))
    b.free("n")
    b.cord(l1, "p", "n")
    b.cord(l2, "q", "n")
    return b.network()


def varying_dimension() -> Network:
    """Tense space with a 2-dimensional piece glued to 1-dimensional branches.

    ``x`` is tied to anchor ``p`` at distance ``|pq|``, so its circle passes
    through anchor ``q``.  ``y`` and ``z`` are each tied at unit length to
    both ``q`` and ``x``.  Away from ``x = q`` each of ``y``, ``z`` is an
    intersection point of two unit circles, locally fixed by ``x``; at
    ``x = q`` both circles coincide and ``y``, ``z`` move independently.
    """
    b = _Builder(2)
    b.anchor("p", (-2.0, 0.0))
    b.anchor("q", (0.0, 0.0))
    for n in ("x", "y", "z"):
        b.free(n)
    b.cord(2.0, "p", "x")
    b.cord(1.0, "q", "y")
    b.cord(1.0, "x", "y")
    b.cord(1.0, "q", "z")
    b.cord(1.0, "x", "z")
    return b.network()


def firm_trio() -> tuple[Network, Network, Network]:
    """(a) a tie between anchors at exactly its length; (b) a stretched cord
    ``(p, m, q)`` with a sliding node; (c) a slack cord of length 3 with a
    sliding node between anchors at distance 2."""
    a = _Builder(2)
    a.anchor("p", (-1.0, 0.0))
    a.anchor("q", (1.0, 0.0))
    a.cord(2.0, "p", "q")
    b = _Builder(2)
    b.anchor("p", (-1.0, 0.0))
    b.anchor("q", (1.0, 0.0))
    b.free("m")
    b.cord(2.0, "p", "m", "q")
    c = _Builder(2)
    c.anchor("p", (-1.0, 0.0))
    c.anchor("q", (1.0, 0.0))
    c.free("m")
    c.cord(3.0, "p", "m", "q")
    return a.network(), b.network(), c.network()


# -- composition --------------------------------------------------------------


GADGETS: dict[str, Callable[..., Network]] = {
    "y": y_network,
    "clothesline": clothesline,
    "adder": adder,
    "scaler": scaler,
    "cartesian2d": cartesian2d,
    "cartesian3d": cartesian3d,
    "higher-mobility": higher_mobility_example,
    "ellipse": gardeners_ellipse,
    "compass": string_compass,
    "vesica": vesica,
    "varying-dimension": varying_dimension,
    "firm-a": lambda: firm_trio()[0],
    "firm-b": lambda: firm_trio()[1],
    "firm-c": lambda: firm_trio()[2],
}


@dataclass(frozen=True)
class GadgetSpec:
    name: str
    parameters: Mapping[str, object] = field(default_factory=dict)
    prefix: str = ""

    def build(self) -> Network:
        try:
            ctor = GADGETS[self.name]
        except KeyError:
            raise NetworkError(f"unknown gadget {self.name!r}") from None
        return prefixed(ctor(**dict(self.parameters)), self.prefix)


def prefixed(net: Network, prefix: str) -> Network:
    if not prefix:
        return net
    ren = {nid: prefix + nid for nid in net.node_ids}
    return Network(
        net.dimension,
        tuple(Node(ren[n.id], n.anchor) for n in net.nodes),
        tuple(Cord(c.length, tuple(ren[v] for v in c.nodes)) for c in net.cords),
    )


def compose(parts: Sequence[GadgetSpec | Network], welds: Sequence[tuple[str, str]] = ()) -> Network:
    """Disjoint union of the parts with each weld pair identified as one node.

    A welded group keeps the id of its first member.  Anchored members of a
    group must agree on position; an anchor wins over free members.
    """
    nets = [p.build() if isinstance(p, GadgetSpec) else p for p in parts]
    if not nets:
        raise NetworkError("nothing to compose")
    d = nets[0].dimension
    if any(n.dimension != d for n in nets):
        raise NetworkError("parts live in different dimensions")
    nodes: dict[str, Node] = {}
    for net in nets:
        for n in net.nodes:
            if n.id in nodes:
                raise NetworkError(f"node id {n.id!r} appears in two parts; use prefixes")
            nodes[n.id] = n

    parent = {nid: nid for nid in nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    order = {nid: i for i, nid in enumerate(nodes)}
    for a, b in welds:
        for v in (a, b):
            if v not in nodes:
                raise NetworkError(f"weld references unknown node {v!r}")
        ra, rb = find(a), find(b)
        if ra != rb:
            if order[rb] < order[ra]:
                ra, rb = rb, ra
            parent[rb] = ra

    groups: dict[str, list[str]] = {}
    for nid in nodes:
        groups.setdefault(find(nid), []).append(nid)
    merged = []
    for root, members in groups.items():
        anchors = [nodes[m].anchor for m in members if nodes[m].anchor is not None]
        for a in anchors[1:]:
            if np.max(np.abs(np.asarray(a) - np.asarray(anchors[0]))) > 1e-12:
                raise NetworkError(f"conflicting anchors in weld group {members}")
        merged.append(Node(root, anchors[0] if anchors else None))
    cords = []
    for net in nets:
        for c in net.cords:
            ns = tuple(find(v) for v in c.nodes)
            cords.append(Cord(c.length, ns))
    return Network(d, tuple(merged), tuple(cords))
