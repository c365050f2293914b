"""Plane linkages and their translation to and from cord networks.

A linkage is a set of nodes (some anchored) joined by rigid two-node links.
Replacing each link by a tie of the same length gives a network whose
tense configurations are exactly the linkage's realizations.  Going the
other way, a cord is simulated by a linkage whose total path length is
conserved while its pieces slide: a reflection kite keeps ``|xq| = |xq'|``
with ``q'`` on the ray from ``p`` through ``x``, so ``px + xq = |pq'|``, a
rigid link.

Sliders (a node constrained to the line through two others) are kept as
ideal collinearity constraints.  :func:`expand_sliders` replaces those
whose line is carried by a rigid link with Peaucellier cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .model import TOL_FEAS, Configuration, Cord, Network, NetworkError, Node
from .solver import DEFAULT_OPTIONS, SolveOptions, _levenberg_marquardt

Realization = Configuration


class LinkageError(NetworkError):
    pass


@dataclass(frozen=True)
class Link:
    a: str
    b: str
    distance: float

    def __post_init__(self):
        if self.a == self.b:
            raise LinkageError(f"link joins {self.a!r} to itself")
        if not self.distance > 0:
            raise LinkageError(f"link {self.a}-{self.b} needs positive length, got {self.distance}")


@dataclass(frozen=True)
class Slider:
    """``node`` stays on the line through ``a`` and ``b`` (between them when ``between``)."""

    node: str
    a: str
    b: str
    between: bool = False


@dataclass(frozen=True)
class Linkage:
    """Planar linkage.  ``hint`` optionally suggests positions for realization."""

    nodes: tuple[Node, ...]
    links: tuple[Link, ...]
    sliders: tuple[Slider, ...] = ()
    hint: Mapping[str, tuple[float, ...]] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise LinkageError("duplicate node ids")
        known = set(ids)
        for n in self.nodes:
            if n.anchor is not None and len(n.anchor) != 2:
                raise LinkageError(f"anchor of {n.id!r} is not a plane point")
        for lk in self.links:
            for end in (lk.a, lk.b):
                if end not in known:
                    raise LinkageError(f"link refers to unknown node {end!r}")
        for s in self.sliders:
            for end in (s.node, s.a, s.b):
                if end not in known:
                    raise LinkageError(f"slider refers to unknown node {end!r}")

    @property
    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    @property
    def anchors(self) -> dict[str, np.ndarray]:
        return {n.id: np.array(n.anchor) for n in self.nodes if n.anchor is not None}


def merge(*parts: Linkage) -> Linkage:
    """Union of linkages; nodes with the same id are identified (anchors must agree)."""
    nodes: dict[str, Node] = {}
    links, sliders, hint = [], [], {}
    for part in parts:
        for n in part.nodes:
            old = nodes.get(n.id)
            if old is not None and old.anchor is not None and n.anchor is not None and old.anchor != n.anchor:
                raise LinkageError(f"conflicting anchors for {n.id!r}")
            if old is None or old.anchor is None:
                nodes[n.id] = n
        links += part.links
        sliders += part.sliders
        hint.update(part.hint)
    return Linkage(tuple(nodes.values()), tuple(links), tuple(sliders), hint)


# ---------------------------------------------------------------------------
# networks


def network_from_linkage(lk: Linkage) -> Network:
    """One tie per link; tense configurations of the result are the realizations."""
    if lk.sliders:
        raise LinkageError("sliders have no cord counterpart; expand them first")
    return Network(2, tuple(lk.nodes), tuple(Cord(l.distance, (l.a, l.b)) for l in lk.links))


def linkage_from_network(net: Network) -> Linkage:
    """Inverse of :func:`network_from_linkage`; every cord must be a tie."""
    if net.dimension != 2:
        raise LinkageError("linkages are planar")
    links = []
    for c in net.cords:
        if not c.is_tie:
            raise LinkageError(f"cord {c.nodes} is not a tie")
        links.append(Link(c.nodes[0], c.nodes[1], c.length))
    return Linkage(tuple(net.nodes), tuple(links))


# ---------------------------------------------------------------------------
# constraint system


class _System:
    def __init__(self, lk: Linkage, pinned: Mapping[str, Sequence[float]] | None = None):
        self.lk = lk
        fixed = dict(lk.anchors)
        fixed.update({k: np.asarray(v, float) for k, v in (pinned or {}).items()})
        self.fixed = fixed
        self.free = [n for n in lk.node_ids if n not in fixed]
        self.pos = {n: i for i, n in enumerate(self.free)}
        self.n = 2 * len(self.free)

    def points(self, x: np.ndarray) -> dict[str, np.ndarray]:
        out = {k: v for k, v in self.fixed.items()}
        for n, i in self.pos.items():
            out[n] = x[2 * i : 2 * i + 2]
        return out

    def flatten(self, placement: Mapping[str, Sequence[float]]) -> np.ndarray:
        x = np.zeros(self.n)
        for n, i in self.pos.items():
            x[2 * i : 2 * i + 2] = placement[n]
        return x

    def _add(self, J, row, node, g):
        i = self.pos.get(node)
        if i is not None:
            J[row, 2 * i : 2 * i + 2] += g

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)[0]

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)[1]

    def evaluate(self, x: np.ndarray):
        P = self.points(x)
        m = len(self.lk.links) + len(self.lk.sliders)
        r = np.zeros(m)
        J = np.zeros((m, self.n))
        for k, l in enumerate(self.lk.links):
            v = P[l.a] - P[l.b]
            dist = float(np.linalg.norm(v))
            r[k] = dist - l.distance
            u = v / dist if dist > 0 else np.zeros(2)
            self._add(J, k, l.a, u)
            self._add(J, k, l.b, -u)
        for j, s in enumerate(self.lk.sliders):
            k = len(self.lk.links) + j
            w = P[s.b] - P[s.a]
            v = P[s.node] - P[s.a]
            nw = float(np.linalg.norm(w))
            if nw == 0:
                r[k] = float(np.linalg.norm(v))
                continue
            c = w[0] * v[1] - w[1] * v[0]
            r[k] = c / nw
            dv = np.array([-w[1], w[0]]) / nw
            dw = np.array([v[1], -v[0]]) / nw - c * w / nw**3
            self._add(J, k, s.node, dv)
            self._add(J, k, s.b, dw)
            self._add(J, k, s.a, -dw - dv)
        return r, J


def _gauss_newton(system: _System, x: np.ndarray, tol: float = 1e-13, max_steps: int = 100):
    r, J = system.evaluate(x)
    norm = np.linalg.norm(r)
    for _ in range(max_steps):
        if norm <= tol:
            break
        step = np.linalg.lstsq(J, r, rcond=None)[0]
        lam = 1.0
        while lam > 1e-8:
            y = x - lam * step
            ry, Jy = system.evaluate(y)
            if np.linalg.norm(ry) < norm:
                break
            lam /= 2
        else:
            break
        x, r, J, norm = y, ry, Jy, np.linalg.norm(ry)
    return x, norm


def residuals(lk: Linkage, realization: Configuration) -> np.ndarray:
    """Link length errors then slider distances from their lines."""
    s = _System(lk)
    return s.residual(s.flatten({n: realization[n] for n in s.free}))


def max_residual(lk: Linkage, realization: Configuration) -> float:
    r = residuals(lk, realization)
    return float(np.max(np.abs(r))) if len(r) else 0.0


def _betweenness_ok(lk: Linkage, P: Mapping[str, np.ndarray], tol: float = 1e-9) -> bool:
    for s in lk.sliders:
        if not s.between:
            continue
        w = P[s.b] - P[s.a]
        t = float((P[s.node] - P[s.a]) @ w) / max(float(w @ w), 1e-300)
        if t < -tol or t > 1 + tol:
            return False
    return True


def is_realization(lk: Linkage, realization: Configuration, tol: float = TOL_FEAS) -> bool:
    for nid, p in lk.anchors.items():
        if not np.allclose(realization[nid], p, atol=tol, rtol=0):
            return False
    P = {n: realization[n] for n in lk.node_ids}
    return max_residual(lk, realization) <= tol and _betweenness_ok(lk, P)


def _start_points(system: _System, rng: np.random.Generator, jitter: float) -> np.ndarray:
    lk = system.lk
    known = {**{k: np.asarray(v, float) for k, v in lk.hint.items()}, **system.fixed}
    pts = np.array(list(known.values())) if known else np.zeros((1, 2))
    center = pts.mean(axis=0)
    spread = float(np.max(np.linalg.norm(pts - center, axis=1))) if len(pts) > 1 else 1.0
    spread = spread or 1.0
    x = np.zeros(system.n)
    for n, i in system.pos.items():
        base = np.asarray(lk.hint[n], float) if n in lk.hint else center + spread * rng.standard_normal(2)
        x[2 * i : 2 * i + 2] = base + jitter * spread * rng.standard_normal(2)
    return x


def realize(
    lk: Linkage,
    opts: SolveOptions = DEFAULT_OPTIONS,
    pinned: Mapping[str, Sequence[float]] | None = None,
) -> Realization | None:
    """A realization by multistart least squares, or ``None`` if none was found.

    Restart ``r`` uses the generator seeded ``seed + r``; the first starts
    at the hint exactly, later ones add growing jitter.  ``pinned`` fixes
    extra nodes.  Failure proves nothing: the equations are nonconvex.
    """
    system = _System(lk, pinned)
    if system.n == 0:
        config = Configuration({n: tuple(p) for n, p in system.fixed.items()})
        return config if is_realization(lk, config, opts.tol_feas) else None
    for r in range(opts.restarts):
        rng = np.random.default_rng(opts.seed + r)
        x0 = _start_points(system, rng, 0.0 if r == 0 else 0.05 * r)
        res = _levenberg_marquardt(system.residual, system.jacobian, x0, opts.max_iterations)
        x, _ = _gauss_newton(system, res.x)
        config = Configuration({n: tuple(float(c) for c in p) for n, p in system.points(x).items()})
        if is_realization(lk, config, opts.tol_feas):
            return config
    return None


def move(
    lk: Linkage,
    realization: Realization,
    rng: np.random.Generator,
    scale: float = 0.05,
    pinned: Mapping[str, Sequence[float]] | None = None,
) -> Realization | None:
    """Perturb the free nodes randomly and pull back onto the realization set."""
    system = _System(lk, pinned)
    x = system.flatten({n: realization[n] for n in system.free})
    x, norm = _gauss_newton(system, x + scale * rng.standard_normal(len(x)))
    config = Configuration({n: tuple(float(c) for c in p) for n, p in system.points(x).items()})
    return config if norm <= TOL_FEAS and is_realization(lk, config) else None


def drive(lk: Linkage, start: Realization, node: str, path: Sequence[Sequence[float]]) -> list[Realization]:
    """Realizations with ``node`` pinned along ``path``, each warm-started from the last.

    Stops early (returning what it has) if a position cannot be reached.
    """
    out, current = [], start
    for p in path:
        system = _System(lk, {node: p})
        x = system.flatten({n: current[n] for n in system.free})
        x, norm = _gauss_newton(system, x)
        config = Configuration({n: tuple(float(c) for c in q) for n, q in system.points(x).items()})
        if norm > TOL_FEAS or not is_realization(lk, config):
            break
        out.append(config)
        current = config
    return out


# ---------------------------------------------------------------------------
# rigid bodies


def multi_node_link(points: Mapping[str, Sequence[float]]) -> Linkage:
    """Complete graph of links holding the named points rigidly at their mutual distances."""
    names = list(points)
    if len(names) < 2:
        raise LinkageError("a rigid body needs at least two points")
    P = {n: np.asarray(points[n], float) for n in names}
    links = []
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            dist = float(np.linalg.norm(P[a] - P[b]))
            if dist == 0:
                raise LinkageError(f"points {a!r} and {b!r} coincide")
            links.append(Link(a, b, dist))
    return Linkage(tuple(Node(n) for n in names), tuple(links), hint={n: tuple(P[n]) for n in names})


def backplane(anchors: Sequence[tuple[str, Sequence[float]]]) -> Linkage:
    """The anchors as a free rigid body: the same linkage up to a rigid motion."""
    return multi_node_link(dict(anchors))


def four_bar(
    ground=((0.0, 0.0), (4.0, 0.0)), crank: float = 1.5, coupler: float = 4.0, rocker: float = 3.0
) -> Linkage:
    """Crank ``a-b``, coupler ``b-c`` and rocker ``c-d`` over anchored ground pivots ``a, d``."""
    a, d = (np.asarray(p, float) for p in ground)
    hint_b = a + np.array([0.0, crank])
    hint_c = d + np.array([0.0, rocker])
    return Linkage(
        (Node("a", tuple(a)), Node("b"), Node("c"), Node("d", tuple(d))),
        (Link("a", "b", crank), Link("b", "c", coupler), Link("c", "d", rocker)),
        hint={"b": tuple(hint_b), "c": tuple(hint_c)},
    )


# ---------------------------------------------------------------------------
# Peaucellier's inversor


def _circle_intersections(c1, r1, c2, r2):
    c1, c2 = np.asarray(c1, float), np.asarray(c2, float)
    v = c2 - c1
    dist = float(np.linalg.norm(v))
    if dist == 0 or dist > r1 + r2 or dist < abs(r1 - r2):
        return None
    a = (r1 * r1 - r2 * r2 + dist * dist) / (2 * dist)
    h = np.sqrt(max(r1 * r1 - a * a, 0.0))
    m = c1 + a * v / dist
    n = np.array([-v[1], v[0]]) / dist
    return m + h * n, m - h * n


def peaucellier(c=(0.0, 0.0), circle_radius: float = 1.0, arm_lengths=(3.0, 2.0)) -> Linkage:
    """Peaucellier cell driving ``x`` on a straight line.

    Anchors ``c`` and ``o = c + (circle_radius, 0)``; the crank ``o-d`` keeps
    ``d`` on the circle through ``c``.  Arms ``c-p``, ``c-q`` have length
    ``arm_lengths[0]`` and the rhombus ``p d q x`` has side
    ``arm_lengths[1]``.  Then ``|cd| |cx| = |cp|^2 - |pd|^2`` and ``x`` runs
    on the line perpendicular to ``co`` at that product over ``2 |co|``.
    """
    A, B = (float(v) for v in arm_lengths)
    rho = float(circle_radius)
    if not (A > B > 0 and rho > 0):
        raise LinkageError("need arm > side > 0 and a positive crank")
    if 2 * rho <= A - B:
        raise LinkageError("the crank circle never reaches the cell's working range")
    c = np.asarray(c, float)
    o = c + np.array([rho, 0.0])
    k2 = A * A - B * B
    line = k2 / (2 * rho)
    x = c + np.array([line, 0.0])
    # start with x at the foot of the line and d at its inverse
    if not A - B <= line <= A + B:
        x = c + np.array([line, np.sqrt(max((A + B - 1e-6) ** 2 - line**2, 0.0)) * 0.5])
    d = c + (x - c) * k2 / float((x - c) @ (x - c))
    pq = _circle_intersections(c, A, x, B)
    if pq is None:
        raise LinkageError("cell cannot be assembled")
    hint = {"d": tuple(d), "x": tuple(x), "p": tuple(pq[0]), "q": tuple(pq[1])}
    nodes = (Node("c", tuple(c)), Node("o", tuple(o)), Node("d"), Node("p"), Node("q"), Node("x"))
    links = (
        Link("o", "d", rho),
        Link("c", "p", A),
        Link("c", "q", A),
        Link("p", "d", B),
        Link("d", "q", B),
        Link("q", "x", B),
        Link("x", "p", B),
    )
    return Linkage(nodes, links, hint=hint)


@dataclass(frozen=True)
class InversorReadout:
    product: float  # |cd| |cx|
    stated: float  # |cp|^2
    corrected: float  # |cp|^2 - |pd|^2
    collinearity: float  # distance of d from line cx


def inversor_readout(r: Realization, c="c", d="d", p="p", x="x") -> InversorReadout:
    C, D, P, X = (np.asarray(r[n], float) for n in (c, d, p, x))
    cd, cx, cp, pd = (float(np.linalg.norm(u)) for u in (D - C, X - C, P - C, D - P))
    w = X - C
    off = abs(w[0] * (D - C)[1] - w[1] * (D - C)[0]) / max(cx, 1e-300)
    return InversorReadout(cd * cx, cp * cp, cp * cp - pd * pd, off)


def crank_path(lk: Linkage, samples: int, sweep: float = 1.0, crank="d", pivot="o") -> list[np.ndarray]:
    """Positions of the crank end around its pivot, centred on its hinted angle."""
    o = lk.anchors[pivot]
    start = np.asarray(lk.hint[crank], float) - o
    radius = float(np.linalg.norm(start))
    theta0 = np.arctan2(start[1], start[0])
    return [o + radius * np.array([np.cos(t), np.sin(t)]) for t in theta0 + np.linspace(-sweep, sweep, samples)]


# ---------------------------------------------------------------------------
# cords as linkages


def _kite(prefix: str, q: str, q2: str, a: float, b: float) -> tuple[list[Node], list[Link], tuple[str, str]]:
    """Nodes ``s, r`` equidistant from ``q`` and ``q2``: they span the mirror line between them."""
    s, r = prefix + "s", prefix + "r"
    links = [Link(s, q, a), Link(s, q2, a), Link(r, q, b), Link(r, q2, b)]
    return [Node(s), Node(r)], links, (s, r)


def _mirror_hint(hint, prefix, q, q2, a, b):
    """Hint positions for a kite mirroring ``q`` to ``q2`` across a line through ``axis_node``."""
    Q, Q2 = np.asarray(hint[q]), np.asarray(hint[q2])
    m = (Q + Q2) / 2
    v = Q2 - Q
    nv = float(np.linalg.norm(v))
    n = np.array([-v[1], v[0]]) / nv if nv > 0 else np.array([0.0, 1.0])
    half = nv / 2
    hint[prefix + "s"] = tuple(m + np.sqrt(a * a - half * half) * n)
    hint[prefix + "r"] = tuple(m - np.sqrt(b * b - half * half) * n)


def cord_gadget(
    cord: Cord,
    anchors: Mapping[str, Sequence[float]] | None = None,
    hint: Mapping[str, Sequence[float]] | None = None,
    bar_scale: float = 1.5,
) -> Linkage:
    """Linkage keeping the path length of ``cord`` equal to its length while its nodes move.

    One interior node ``(p, x, q)``: ``q'`` is the mirror image of ``q`` in
    a line through ``x`` (a kite ``s, r`` with bars ``bar_scale * L`` and
    ``4/3`` of that, so its apexes differ), ``x`` slides on the rigid link
    ``p-q'`` of length ``L``, so ``px + xq = L``.  Two interior nodes
    ``(p, x, y, t)``: the same reflection at ``y`` puts ``t'`` on the ray
    ``x -> y`` with ``|yt'| = |yt|``, reducing the cord to ``(p, x, t')``.
    ``anchors`` fixes end nodes; ``hint`` places the cord's nodes for
    realization (a tense placement works).
    """
    nodes = list(cord.nodes)
    interior = len(nodes) - 2
    if interior not in (1, 2):
        raise LinkageError(f"cord gadget supports 1 or 2 interior nodes, got {interior}; unsupported, compose gadgets")
    L = cord.length
    a, b = bar_scale * L, bar_scale * L * 4 / 3
    anchors = {k: tuple(float(c) for c in v) for k, v in (anchors or {}).items()}
    hint = {k: tuple(float(c) for c in v) for k, v in (hint or {}).items()}
    hint.update(anchors)
    new_nodes: list[Node] = []
    links: list[Link] = []
    sliders: list[Slider] = []

    def reflect(prefix, hinge, q, image, before):
        """``image`` = mirror of ``q`` across a line through ``hinge``, on the ray before->hinge."""
        ns, ls, (s, r) = _kite(prefix, q, image, a, b)
        new_nodes.extend(ns)
        links.extend(ls)
        sliders.append(Slider(hinge, s, r))
        if all(k in hint for k in (before, hinge, q)):
            H, Bf = np.asarray(hint[hinge]), np.asarray(hint[before])
            u = H - Bf
            u = u / np.linalg.norm(u)
            hint[image] = tuple(H + np.linalg.norm(np.asarray(hint[q]) - H) * u)
            _mirror_hint(hint, prefix, q, image, a, b)

    p, x = nodes[0], nodes[1]
    if interior == 1:
        q = nodes[2]
        target = q + "'"
        reflect("k:", x, q, target, p)
    else:
        y, t = nodes[2], nodes[3]
        t1 = t + "'"
        new_nodes.append(Node(t1))
        reflect("k2:", y, t, t1, x)
        sliders.append(Slider(y, x, t1, between=True))
        target = t + "''"
        reflect("k1:", x, t1, target, p)
    new_nodes.append(Node(target))
    links.append(Link(p, target, L))
    sliders.append(Slider(x, p, target, between=True))
    base = [Node(n, anchors.get(n)) for n in nodes]
    return Linkage(tuple(base + new_nodes), tuple(links), tuple(sliders), hint)


def cord_path_length(cord: Cord, realization: Realization) -> float:
    P = [np.asarray(realization[n], float) for n in cord.nodes]
    return float(sum(np.linalg.norm(P[i + 1] - P[i]) for i in range(len(P) - 1)))


# ---------------------------------------------------------------------------
# sliders as Peaucellier cells


def expand_sliders(lk: Linkage, realization: Realization | None = None) -> tuple[Linkage, list[Slider]]:
    """Replace each slider whose carrier ``a-b`` is a link by a Peaucellier cell.

    The cell's pivots ``c, o`` are braced rigidly to ``a`` and ``b`` so its
    output line is the line ``ab`` and its output node is the slider node.
    With ``h = |ab|`` the pivot ``c`` sits at distance ``h`` from the line,
    ``|co| = h / 2`` and the cell has arm ``1.25 h``, side ``0.75 h``; the
    output then covers the line within ``1.7 h`` of the foot of ``c``.
    Sliders on lines not carried by a link cannot be expanded this way and
    are returned as the second element (they stay ideal constraints).
    """
    linked = {frozenset((l.a, l.b)) for l in lk.links}
    place = dict(lk.hint)
    if realization is not None:
        place.update({n: tuple(realization[n]) for n in lk.node_ids})
    nodes, links, kept, skipped = list(lk.nodes), list(lk.links), [], []
    for i, s in enumerate(lk.sliders):
        if frozenset((s.a, s.b)) not in linked:
            kept.append(s)
            skipped.append(s)
            continue
        pre = f"pc{i}:"
        A_, B_ = np.asarray(place[s.a], float), np.asarray(place[s.b], float)
        h = float(np.linalg.norm(B_ - A_))
        u = (B_ - A_) / h
        n = np.array([-u[1], u[0]])
        foot = (A_ + B_) / 2
        C = foot - h * n
        O = C + (h / 2) * n
        arm, side = 1.25 * h, 0.75 * h
        X = np.asarray(place[s.node], float)
        D = C + (X - C) * (arm * arm - side * side) / float((X - C) @ (X - C))
        pq = _circle_intersections(C, arm, X, side)
        if pq is None:
            raise LinkageError(f"slider {s.node} is outside the reach of its cell")
        c, o, d, p, q = (pre + k for k in "codpq")
        nodes += [Node(c), Node(o), Node(d), Node(p), Node(q)]
        for end in (s.a, s.b):
            links.append(Link(end, c, float(np.linalg.norm(np.asarray(place[end]) - C))))
            links.append(Link(end, o, float(np.linalg.norm(np.asarray(place[end]) - O))))
        links += [
            Link(c, o, h / 2),
            Link(o, d, h / 2),
            Link(c, p, arm),
            Link(c, q, arm),
            Link(p, d, side),
            Link(d, q, side),
            Link(q, s.node, side),
            Link(s.node, p, side),
        ]
        place.update({c: tuple(C), o: tuple(O), d: tuple(D), p: tuple(pq[0]), q: tuple(pq[1])})
    return Linkage(tuple(nodes), tuple(links), tuple(kept), place), skipped


# ---------------------------------------------------------------------------
# serialization


def linkage_to_dict(lk: Linkage) -> dict:
    return {
        "nodes": [{"id": n.id, **({"anchor": list(n.anchor)} if n.anchor is not None else {})} for n in lk.nodes],
        "links": [{"a": l.a, "b": l.b, "distance": l.distance} for l in lk.links],
        "sliders": [{"node": s.node, "on": [s.a, s.b], "between": s.between} for s in lk.sliders],
        "hint": {k: list(v) for k, v in lk.hint.items()},
    }


def linkage_from_dict(data: Mapping) -> Linkage:
    try:
        nodes = tuple(
            Node(str(n["id"]), tuple(float(c) for c in n["anchor"]) if n.get("anchor") is not None else None)
            for n in data["nodes"]
        )
        links = tuple(Link(str(l["a"]), str(l["b"]), float(l["distance"])) for l in data.get("links", []))
        sliders = tuple(
            Slider(str(s["node"]), str(s["on"][0]), str(s["on"][1]), bool(s.get("between", False)))
            for s in data.get("sliders", [])
        )
        hint = {str(k): tuple(float(c) for c in v) for k, v in data.get("hint", {}).items()}
    except (KeyError, TypeError, IndexError) as exc:
        raise LinkageError(f"malformed linkage document: {exc}") from None
    return Linkage(nodes, links, sliders, hint)


def renamed(lk: Linkage, mapping: Mapping[str, str]) -> Linkage:
    """The same linkage with node ids replaced through ``mapping`` (others kept)."""
    f = lambda n: mapping.get(n, n)
    return Linkage(
        tuple(Node(f(n.id), n.anchor) for n in lk.nodes),
        tuple(Link(f(l.a), f(l.b), l.distance) for l in lk.links),
        tuple(Slider(f(s.node), f(s.a), f(s.b), s.between) for s in lk.sliders),
        {f(k): v for k, v in lk.hint.items()},
    )


def linkage_from_cords(net: Network, hint: Configuration | None = None) -> Linkage:
    """Linkage whose realizations are the tense configurations of ``net``.

    Ties become links; longer cords become :func:`cord_gadget` instances
    whose private nodes are prefixed ``c<index>/``.
    """
    if net.dimension != 2:
        raise LinkageError("linkages are planar")
    anchors = net.anchors
    place = {} if hint is None else {n: tuple(hint[n]) for n in hint.nodes}
    parts = [Linkage(tuple(net.nodes), (), (), place)]
    for i, c in enumerate(net.cords):
        if c.is_tie:
            parts.append(Linkage(tuple(Node(n, anchors.get(n)) for n in c.nodes), (Link(*c.nodes, c.length),)))
            continue
        g = cord_gadget(c, {n: anchors[n] for n in c.nodes if n in anchors}, {n: place[n] for n in c.nodes if n in place})
        own = set(c.nodes)
        parts.append(renamed(g, {n: f"c{i}/{n}" for n in g.node_ids if n not in own}))
    return merge(*parts)
