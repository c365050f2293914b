"""Brute-force grid search over node positions, independent of the solvers.

Free nodes range over the lattice ``step * Z^2`` inside the box allowed
by the anchors on their cords.  A lattice point rarely satisfies a tight
set of cords exactly, so the search uses the least relaxation ``delta``
at which some lattice placement is feasible (never below ``FLOOR``), and
reports maxima over placements whose cords exceed their lengths by at
most ``delta``.

One free node is searched exhaustively.  Two free nodes with no segment
between them are searched exhaustively too: each cord length splits as
``const + f(x) + g(y)``, and for two cords the inner minimum over ``y``
is a monotone envelope computed once by sorting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cordage.model import Network

STEP = 1e-3
FLOOR = 1e-12
CHUNK = 256


@dataclass
class _Term:
    const: float
    anchors: list  # anchor points at distance from the free node, one entry per segment


def _terms(net: Network, node: str) -> list[_Term]:
    anchors = net.anchors
    out = []
    for c in net.cords:
        const, pts = 0.0, []
        for a, b in c.segments():
            if a in anchors and b in anchors:
                const += float(np.linalg.norm(np.subtract(anchors[a], anchors[b])))
            elif a == node and b in anchors:
                pts.append(np.asarray(anchors[b], float))
            elif b == node and a in anchors:
                pts.append(np.asarray(anchors[a], float))
            elif node in (a, b):
                raise ValueError("segment between free nodes")
        out.append(_Term(const, pts))
    return out


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    # exact decimal lattice values: i / (1 / step)
    scale = round(1 / step)
    return np.arange(int(np.floor(lo * scale)), int(np.ceil(hi * scale)) + 1) / scale


def _box(net: Network, node: str, step: float) -> tuple[np.ndarray, np.ndarray]:
    anchors = net.anchors
    lo, hi = np.full(2, -np.inf), np.full(2, np.inf)
    for c in net.cords:
        if node not in c.nodes:
            continue
        for a in c.nodes:
            if a in anchors:
                p = np.asarray(anchors[a], float)
                lo, hi = np.maximum(lo, p - c.length), np.minimum(hi, p + c.length)
    if not np.all(np.isfinite(lo)):
        raise ValueError(f"node {node!r} is not bounded by an anchor")
    return _axis(lo[0], hi[0], step), _axis(lo[1], hi[1], step)


def _dist_sum(X, Y, pts):
    total = np.zeros_like(X)
    for p in pts:
        total += np.hypot(X - p[0], Y - p[1])
    return total


def _excesses(net: Network, terms, X, Y):
    """``(cords, *X.shape)`` array of path length minus budget."""
    return np.stack([t.const + _dist_sum(X, Y, t.anchors) - c.length for t, c in zip(terms, net.cords)])


# -- one free node ------------------------------------------------------------


@dataclass
class OneNodeGrid:
    xs: np.ndarray
    ys: np.ndarray
    delta: float
    max_slack: np.ndarray  # per cord
    column_top: np.ndarray  # per x: highest feasible y (nan if none)
    column_bottom: np.ndarray


def search_one(net: Network, step: float = STEP) -> OneNodeGrid:
    (node,) = net.free_nodes
    terms = _terms(net, node)
    xs, ys = _box(net, node, step)
    k = len(net.cords)
    # pass 1: least worst excess over the lattice
    best = np.inf
    for i in range(0, len(xs), CHUNK):
        X, Y = np.meshgrid(xs[i : i + CHUNK], ys, indexing="ij")
        best = min(best, float(_excesses(net, terms, X, Y).max(axis=0).min()))
    delta = max(best, 0.0) + FLOOR
    # pass 2: maxima over the relaxed feasible lattice points
    slack = np.full(k, -np.inf)
    top = np.full(len(xs), np.nan)
    bottom = np.full(len(xs), np.nan)
    for i in range(0, len(xs), CHUNK):
        X, Y = np.meshgrid(xs[i : i + CHUNK], ys, indexing="ij")
        E = _excesses(net, terms, X, Y)
        ok = E.max(axis=0) <= delta
        for j in range(k):
            if ok.any():
                slack[j] = max(slack[j], float((-E[j])[ok].max()))
        top[i : i + CHUNK] = np.where(ok, Y, -np.inf).max(axis=1)
        bottom[i : i + CHUNK] = np.where(ok, Y, np.inf).min(axis=1)
    top[~np.isfinite(top)] = np.nan
    bottom[~np.isfinite(bottom)] = np.nan
    return OneNodeGrid(xs, ys, delta, slack, top, bottom)


# -- two free nodes, two cords, no free-free segment ------------------------------


def _node_values(net, node, step):
    terms = _terms(net, node)
    xs, ys = _box(net, node, step)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return xs, ys, X, Y, [t.const for t in terms], [_dist_sum(X, Y, t.anchors) for t in terms]


@dataclass
class TwoNodeGrid:
    xs: np.ndarray
    delta: float
    max_slack: np.ndarray
    column_top: np.ndarray  # first node's highest feasible y per x
    column_bottom: np.ndarray


def search_two(net: Network, step: float = STEP) -> TwoNodeGrid:
    """Exhaustive lattice search for two free nodes and two cords."""
    a, b = net.free_nodes
    if len(net.cords) != 2:
        raise ValueError("the envelope search handles exactly two cords")
    L = [c.length for c in net.cords]
    xs, _, _, Y, _, fa = _node_values(net, a, step)
    _, _, _, _, _, fb = _node_values(net, b, step)
    const = [float(sum(np.linalg.norm(np.subtract(net.anchors[u], net.anchors[v]))
                       for u, v in c.segments() if u in net.anchors and v in net.anchors)) for c in net.cords]
    # lattice points that a single cord already rules out never matter
    keep = np.all([const[k] + fb[k] <= L[k] + 1.0 for k in range(2)], axis=0).ravel()
    gb = [v.ravel()[keep] for v in fb]

    def envelope(k):
        # F(s) = min{ g_k(y) : g_other(y) <= s }, as sorted thresholds and running minima
        other = 1 - k
        order = np.argsort(gb[other], kind="stable")
        return gb[other][order], np.minimum.accumulate(gb[k][order])

    env = [envelope(0), envelope(1)]

    def inner(k, budget):
        """Least g_k over y whose other-cord term fits ``budget`` (inf if none)."""
        thresholds, running = env[k]
        idx = np.searchsorted(thresholds, budget, side="right") - 1
        out = np.full(budget.shape, np.inf)
        good = idx >= 0
        out[good] = running[idx[good]]
        return out

    def excess(k, delta):
        # per x: least cord-k excess over y keeping the other cord within delta
        return const[k] + fa[k] + inner(k, L[1 - k] + delta - const[1 - k] - fa[1 - k]) - L[k]

    delta = FLOOR
    E = [excess(k, delta) for k in range(2)]
    if min(float(e.min()) for e in E) > delta:
        lo, hi = FLOOR, 1.0
        for _ in range(60):
            mid = (lo + hi) / 2
            lo, hi = (lo, mid) if min(float(excess(k, mid).min()) for k in range(2)) <= mid else (mid, hi)
        delta = hi
        E = [excess(k, delta) for k in range(2)]
    slack = np.array([-float(e.min()) for e in E])
    # x is feasible when some y fits both cords
    ok = E[0] <= delta
    top = np.where(ok, Y, -np.inf).max(axis=1)
    bottom = np.where(ok, Y, np.inf).min(axis=1)
    top[~np.isfinite(top)] = np.nan
    bottom[~np.isfinite(bottom)] = np.nan
    return TwoNodeGrid(xs, delta, slack, top, bottom)
