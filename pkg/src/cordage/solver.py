"""Convex optimization over the configuration space of a network.

A cord constraint bounds a sum of Euclidean norms of affine maps, so the
configuration space is the projection of a second-order-cone feasible set:
introduce one length variable per segment, require each segment vector to
lie in the cone of its length, and bound the lengths' sum along each cord.
Every convex search here is a conic program solved by an interior-point
method.  :func:`find_tense_configuration` is the exception: it attacks the
nonconvex equality system by multistart least squares.

Deciding whether a quantity vanishes on the configuration space is badly
conditioned for taut networks.  A node sliding on a straight cord moves by
the square root of the cord's excess, and chains of such nodes compound
this to fourth roots and beyond, so a configuration violating its lengths
by 1e-12 can show slacks near 1e-3.  Zero tests therefore solve the
program over lengths relaxed by a range of small amounts and extrapolate
to no relaxation (:func:`limit_at_zero`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import clarabel
import numpy as np
from scipy import sparse
from scipy.optimize import least_squares

from .model import (
    TOL_FEAS,
    TOL_TENSE,
    Configuration,
    Cord,
    Layout,
    Network,
    NetworkError,
    slack_report,
    validate_network,
)

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps

#: relaxations used when extrapolating a quantity to zero relaxation
LIMIT_DELTAS = tuple(10.0**-k for k in (4, 5, 6, 7, 8))
#: largest coordinate change accepted when touching up an optimizer's output
REFINE_MOVE = 1e-4


class InfeasibleError(Exception):
    """The network has no configuration; ``violation`` is the least achievable worst excess."""

    def __init__(self, violation: float):
        super().__init__(f"network is infeasible (least worst-cord excess {violation:.6g})")
        self.violation = violation


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveOptions:
    seed: int = 0
    max_iterations: int = 1000
    tol_feas: float = TOL_FEAS
    tol_tense: float = TOL_TENSE
    restarts: int = 32

    def __post_init__(self):
        if self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


DEFAULT_OPTIONS = SolveOptions()


def with_seed(opts: SolveOptions, seed: int) -> SolveOptions:
    return replace(opts, seed=seed)


def _require_valid(net: Network) -> None:
    report = validate_network(net)
    if not report.valid:
        raise NetworkError("; ".join(v.message for v in report.violations))


def _violation(layout: Layout, x: np.ndarray) -> float:
    if len(layout.lengths) == 0:
        return 0.0
    return max(0.0, -float(layout.slacks(x).min()))


# ---------------------------------------------------------------------------
# conic programs


class ConicProgram:
    """Second-order-cone model of a network's configuration space.

    Variables are the free coordinates ``x``, one length ``l_s`` per
    segment and a scalar ``t``.  Constraints: ``|segment_s(x)| <= l_s`` and
    ``sum_{s in C} l_s <= L_C + delta + t`` for every cord ``C``.  ``t`` is
    pinned to zero unless the worst excess is being minimized.
    """

    def __init__(self, layout: Layout, max_iterations: int = 500):
        self.layout = layout
        self.max_iterations = max_iterations
        n, S, d = layout.n_vars, len(layout.seg_a), layout.d
        self.n, self.S = n, S
        self.nz = n + S + 1
        m = len(layout.lengths)
        rows = [int(k) for k in layout.seg_cord] + list(range(m))
        cols = [n + s for s in range(S)] + [self.nz - 1] * m
        vals = [1.0] * S + [-1.0] * m
        self.cord_block = sparse.csc_matrix((vals, (rows, cols)), shape=(m, self.nz))
        fpos = {int(i): j for j, i in enumerate(layout.free)}
        rows, cols, vals, const = [], [], [], []
        r = 0
        for s in range(S):
            rows.append(r)
            cols.append(n + s)
            vals.append(-1.0)
            const.append(0.0)
            r += 1
            a, b = int(layout.seg_a[s]), int(layout.seg_b[s])
            for ax in range(d):
                c = 0.0
                if b in fpos:
                    rows.append(r)
                    cols.append(fpos[b] * d + ax)
                    vals.append(-1.0)
                else:
                    c += layout.base[b, ax]
                if a in fpos:
                    rows.append(r)
                    cols.append(fpos[a] * d + ax)
                    vals.append(1.0)
                else:
                    c -= layout.base[a, ax]
                const.append(c)
                r += 1
        self.cone_block = sparse.csc_matrix((vals, (rows, cols)), shape=(r, self.nz))
        self.cone_rhs = np.array(const)

    def solve(
        self,
        linear=None,
        quadratic=None,
        cord_weights=None,
        delta: float = 0.0,
        fixed: dict[int, float] | None = None,
        worst_excess: bool = False,
        nearest: np.ndarray | None = None,
        tol: float = 1e-10,
    ) -> tuple[np.ndarray, float]:
        """Minimize ``linear.x + |x - quadratic|^2 / 2 + cord_weights.path`` (plus ``t``).

        ``nearest`` instead minimizes the largest distance of any free node
        from its position in that flat coordinate vector; ``t`` then
        returns that distance.  Returns ``(x, t)``.  Raises
        :class:`InfeasibleError` (only possible without ``worst_excess``)
        or :class:`ConvergenceError`.
        """
        L = self.layout
        n, S, nz = self.n, self.S, self.nz
        q = np.zeros(nz)
        P = sparse.csc_matrix((nz, nz))
        if linear is not None:
            q[:n] += linear
        if quadratic is not None:
            diag = np.zeros(nz)
            diag[:n] = 1.0
            P = sparse.diags(diag, format="csc")
            q[:n] -= np.asarray(quadratic, dtype=float)
        if cord_weights is not None:
            q[n : n + S] += np.asarray(cord_weights, float)[L.seg_cord]
        blocks = [self.cord_block, self.cone_block]
        rhs = [L.lengths + delta, self.cone_rhs]
        cones = [clarabel.NonnegativeConeT(len(L.lengths))]
        zero_cols, zero_rhs = [], []
        if worst_excess:
            q[-1] = 1.0
        else:
            zero_cols.append(nz - 1)
            zero_rhs.append(0.0)
        for j, v in (fixed or {}).items():
            zero_cols.append(int(j))
            zero_rhs.append(float(v))
        k = len(zero_cols)
        if k:
            blocks.insert(0, sparse.csc_matrix((np.ones(k), (np.arange(k), zero_cols)), shape=(k, nz)))
            rhs.insert(0, np.array(zero_rhs))
            cones.insert(0, clarabel.ZeroConeT(k))
        cones += [clarabel.SecondOrderConeT(L.d + 1)] * S
        if nearest is not None:
            # extra variable r >= |x_node - nearest_node| for every free node
            blocks = [sparse.hstack([B, sparse.csc_matrix((B.shape[0], 1))]) for B in blocks]
            q = np.append(q, 1.0)
            P = sparse.block_diag([P, sparse.csc_matrix((1, 1))], format="csc")
            d, nodes = L.d, len(L.free)
            rows, cols, vals = [], [], []
            for i in range(nodes):
                rows.append(i * (d + 1))
                cols.append(nz)
                vals.append(-1.0)
                for ax in range(d):
                    rows.append(i * (d + 1) + 1 + ax)
                    cols.append(i * d + ax)
                    vals.append(-1.0)
            blocks.append(sparse.csc_matrix((vals, (rows, cols)), shape=(nodes * (d + 1), nz + 1)))
            target = np.asarray(nearest, float).reshape(nodes, d)
            rhs.append(np.column_stack([np.zeros(nodes), -target]).ravel())
            cones += [clarabel.SecondOrderConeT(d + 1)] * nodes
        settings = clarabel.DefaultSettings()
        settings.verbose = False
        settings.max_iter = self.max_iterations
        settings.tol_feas = settings.tol_gap_abs = settings.tol_gap_rel = tol
        solution = clarabel.DefaultSolver(
            P, q, sparse.vstack(blocks, format="csc"), np.concatenate(rhs), cones, settings
        ).solve()
        status = str(solution.status)
        if "PrimalInfeasible" in status:
            raise InfeasibleError(float("nan"))
        if "Solved" not in status:
            raise ConvergenceError(f"conic solver stopped with status {status}")
        z = np.array(solution.x)
        return z[:n], float(z[-1])


# ---------------------------------------------------------------------------
# feasibility


def initial_point(layout: Layout, rng: np.random.Generator) -> np.ndarray:
    """Free nodes at the anchors' centroid plus Gaussian jitter."""
    anchored = np.ones(len(layout.ids), bool)
    anchored[layout.free] = False
    anchors = layout.base[anchored]
    if len(anchors):
        center = anchors.mean(axis=0)
        diag = float(np.linalg.norm(anchors.max(axis=0) - anchors.min(axis=0)))
    else:
        center = np.zeros(layout.d)
        diag = 0.0
    sigma = 0.1 * diag if diag > 0 else 1.0
    return (center + sigma * rng.standard_normal((len(layout.free), layout.d))).ravel()


def polish(layout: Layout, x: np.ndarray, max_steps: int = 200) -> np.ndarray:
    """Pull ``x`` back onto the constraint set with minimum-norm Gauss-Newton steps.

    Near-active constraints (slack below 1e-9) enter the linearized system
    with right-hand side zero, so fixing one cord does not break another.
    On taut faces the violation is quadratic in the distance to the set and
    convergence is only linear, so steps are taken in full (non-monotone)
    and the best iterate is kept.
    """
    x = np.array(x, dtype=float)
    if layout.n_vars == 0 or len(layout.lengths) == 0:
        return x
    scale = 1.0 + float(np.max(layout.lengths))
    target = 1e-14 * scale
    slack = layout.slacks(x)
    best, best_w = x, max(0.0, -float(slack.min()))
    stale = 0
    for _ in range(max_steps):
        w = max(0.0, -float(slack.min()))
        if w < best_w:
            best, best_w, stale = x, w, 0
        else:
            stale += 1
        if best_w <= target or stale > 15:
            break
        active = slack <= 1e-9 * scale
        J = layout.path_jacobian(x)[active]
        r = np.maximum(0.0, -slack[active])
        step, *_ = np.linalg.lstsq(J, -r, rcond=1e-12)
        x = x + step
        slack = layout.slacks(x)
    w = max(0.0, -float(slack.min()))
    return x if w < best_w else best


class _SmoothPaths:
    """Cord path lengths with segment norms smoothed to ``sqrt(|v|^2 + eta^2)``.

    The smoothed length over-estimates the true one by at most ``eta`` per
    segment, so a point feasible for the smoothed constraints is feasible.
    Smoothing makes the Hessian finite at coincident nodes.
    """

    def __init__(self, layout: Layout, eta: float = 1e-12):
        self.layout = layout
        self.eta = eta
        d = layout.d
        self.ia = layout.seg_a[:, None] * d + np.arange(d)
        self.ib = layout.seg_b[:, None] * d + np.arange(d)
        self.idx = (layout.free[:, None] * d + np.arange(d)).ravel()

    def values(self, x: np.ndarray) -> np.ndarray:
        diff = self.layout.segment_vectors(x)
        h = np.sqrt(np.einsum("ij,ij->i", diff, diff) + self.eta**2)
        return np.bincount(self.layout.seg_cord, weights=h, minlength=len(self.layout.lengths))

    def derivatives(self, x: np.ndarray):
        """Path lengths, their gradients (cords x free coordinates) and segment data."""
        L = self.layout
        diff = L.segment_vectors(x)
        h = np.sqrt(np.einsum("ij,ij->i", diff, diff) + self.eta**2)
        unit = diff / h[:, None]
        m = len(L.lengths)
        G = np.zeros((m, len(L.ids), L.d))
        np.add.at(G, (L.seg_cord, L.seg_b), unit)
        np.add.at(G, (L.seg_cord, L.seg_a), -unit)
        p = np.bincount(L.seg_cord, weights=h, minlength=m)
        return p, G[:, L.free, :].reshape(m, -1), (unit, h)

    def hessian(self, segdata, weights: np.ndarray) -> np.ndarray:
        """``sum_C weights[C] * Hessian(path_C)`` over the free coordinates."""
        unit, h = segdata
        L = self.layout
        d = L.d
        w = weights[L.seg_cord] / h
        M = (np.eye(d)[None] - unit[:, :, None] * unit[:, None, :]) * w[:, None, None]
        full = np.zeros((len(L.ids) * d, len(L.ids) * d))
        for r, c, sign in ((self.ia, self.ia, 1.0), (self.ib, self.ib, 1.0), (self.ia, self.ib, -1.0), (self.ib, self.ia, -1.0)):
            np.add.at(full, (r[:, :, None], c[:, None, :]), sign * M)
        return full[np.ix_(self.idx, self.idx)]


def _newton_center(merit, z, free, max_steps=100):
    """Damped Newton on a convex barrier merit; ``free`` masks the movable variables."""
    for _ in range(max_steps):
        value, grad, (Q, A, s), noise = merit(z, True)
        g = grad[free]
        # The Hessian is Q + A' S^-2 A.  Near the boundary S^-2 is huge and
        # forming it destroys the flat directions, so solve the augmented
        # system [[Q, A'], [A, -S^2]] instead, as primal-dual methods do.
        Af = A[:, free]
        n = len(g)
        K = np.block([[Q[np.ix_(free, free)], Af.T], [Af, -np.diag(s * s)]])
        rhs = np.concatenate([-g, np.zeros(len(s))])
        try:
            step = np.linalg.solve(K, rhs)[:n]
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(K, rhs, rcond=None)[0][:n]
        decrement = -float(g @ step)
        if not np.isfinite(decrement) or decrement < max(1e-9, 10.0 * noise):
            break
        full = np.zeros_like(z)
        full[free] = step
        a = 1.0
        while a >= 1e-8:
            trial = merit(z + a * full, False)
            if trial is not None and trial[0] <= value - 0.25 * a * decrement + 2.0 * noise:
                break
            a *= 0.5
        if a < 1e-8:
            break
        z = z + a * full
    return z


def phase_one(
    layout: Layout, x: np.ndarray, target: float = 1e-3 * TOL_FEAS, fixed=None, eta: float = 1e-12
) -> np.ndarray:
    """Minimize the worst cord excess ``t`` by log-barrier path following.

    Used when least squares stalls.  On taut networks the configuration
    space has no interior and the excess is a high power of the distance to
    it, so residual minimization converges sublinearly; the barrier problem
    over the inflated lengths ``L + t`` has interior and Newton's method
    stays fast.  The true excess of the result approximates the least
    achievable worst excess (zero for feasible networks).  Coordinates in
    the boolean mask ``fixed`` keep their values.
    """
    paths = _SmoothPaths(layout, eta)
    x = np.array(x, dtype=float)
    m = len(layout.lengths)
    t = max(0.0, float(np.max(paths.values(x) - layout.lengths))) + 1e-6
    z = np.concatenate([x, [t]])
    free = np.ones(len(z), bool)
    if fixed is not None:
        free[:-1] = ~np.asarray(fixed, bool)

    def make_merit(mu):
        def merit(z, hessian):
            p, G, seg = paths.derivatives(z[:-1])
            s = z[-1] + layout.lengths - p
            if np.any(s <= 0):
                return None
            value = z[-1] / mu - float(np.sum(np.log(s)))
            noise = 8 * EPS * (float(np.sum((np.abs(z[-1]) + layout.lengths) / s)) + abs(value))
            grad = np.concatenate([G.T @ (1.0 / s), [1.0 / mu - float(np.sum(1.0 / s))]])
            parts = None
            if hessian:
                Q = np.zeros((len(z), len(z)))
                Q[:-1, :-1] = paths.hessian(seg, 1.0 / s)
                parts = (Q, np.hstack([-G, np.ones((m, 1))]), s)
            return value, grad, parts, noise
        return merit

    mu = t
    for _ in range(40):
        z = _newton_center(make_merit(mu), z, free)
        if _violation(layout, z[:-1]) <= target or mu * m < 1e-2 * target:
            break
        mu /= 8.0
    return z[:-1]


def _finish(layout: Layout, x: np.ndarray, opts: SolveOptions, max_move: float = np.inf) -> np.ndarray:
    """Reduce a conic solution's excess below ``1e-3 * tol_feas`` when it is not already.

    Least squares polishing comes first, then the barrier method.  The
    barrier drifts toward the analytic centre, so optimizers pass
    ``max_move`` to reject refinements that travel too far.
    """
    target = 1e-3 * opts.tol_feas
    for refine in (polish, lambda lay, z: phase_one(lay, z, target)):
        excess = _violation(layout, x)
        if excess <= target:
            break
        try:
            y = refine(layout, x)
        except np.linalg.LinAlgError:
            continue
        if _violation(layout, y) < excess and np.max(np.abs(y - x), initial=0.0) <= max_move:
            x = y
    return x


def _refine(layout: Layout, x: np.ndarray, opts: SolveOptions) -> np.ndarray:
    """Feasibility touch-up for optimizer output that keeps the optimum where it is."""
    if _violation(layout, x) <= 0.5 * opts.tol_feas:
        return x
    return _finish(layout, x, opts, max_move=REFINE_MOVE)


def _program(layout: Layout, opts: SolveOptions) -> ConicProgram:
    return ConicProgram(layout, min(opts.max_iterations, 500))


def _find_x(layout: Layout, opts: SolveOptions, program: ConicProgram | None = None) -> np.ndarray:
    if layout.n_vars == 0:
        x = np.zeros(0)
        excess = _violation(layout, x)
        if excess > opts.tol_feas:
            raise InfeasibleError(excess)
        return x
    x, t = (program or _program(layout, opts)).solve(worst_excess=True)
    x = _finish(layout, x, opts)
    excess = _violation(layout, x)
    if excess <= opts.tol_feas:
        return x
    if t > opts.tol_feas:
        raise InfeasibleError(t)
    raise ConvergenceError(f"configuration found only up to excess {excess:.3e}")


def find_configuration(net: Network, opts: SolveOptions = DEFAULT_OPTIONS) -> Configuration:
    """A configuration maximizing the smallest cord slack.

    Minimizes the worst cord excess; raises :class:`InfeasibleError` with
    that excess when it stays above ``tol_feas``.
    """
    _require_valid(net)
    layout = Layout(net)
    return layout.configuration(_find_x(layout, opts))


# ---------------------------------------------------------------------------
# extrapolation to zero relaxation


def limit_at_zero(deltas, values) -> float:
    """Extrapolate ``v(delta) -> v(0)`` assuming ``v = v0 + c * delta**alpha``.

    The exponent is found by a grid search over (0, 1.5], with ``v0`` and
    ``c >= 0`` fitted by least squares for each candidate.  The result is
    clipped to the smallest observed value, since the quantities of
    interest grow with the relaxation.
    """
    d = np.asarray(deltas, dtype=float)
    v = np.asarray(values, dtype=float)
    lo = float(np.min(v))
    if len(d) < 3:
        return float(v[np.argmin(d)])
    best_r, best_v0 = np.inf, lo
    for alpha in np.linspace(0.02, 1.5, 297):
        A = np.column_stack([np.ones_like(d), d**alpha])
        coef, *_ = np.linalg.lstsq(A, v, rcond=None)
        if coef[1] < 0:
            continue
        r = float(np.sum((A @ coef - v) ** 2))
        if r < best_r:
            best_r, best_v0 = r, float(coef[0])
    return min(best_v0, lo)


def _relaxed_limit(evaluate, deltas=LIMIT_DELTAS) -> float:
    """Extrapolate ``evaluate`` to zero relaxation; a flat response is returned as is.

    ``evaluate(delta)`` returns ``(value, excess)`` where ``excess`` is the
    worst cord excess its solution actually has.  Interior-point solutions
    lose accuracy at small relaxations; solves overshooting their nominal
    relaxation by half are discarded (the three largest are always kept)
    and the fit uses the achieved excess.
    """
    deltas = sorted(deltas)
    lo, hi = evaluate(deltas[0]), evaluate(deltas[-1])
    if abs(hi[0] - lo[0]) <= 1e-3 * deltas[-1] + 1e-12:
        return lo[0]
    points = [lo] + [evaluate(dl) for dl in deltas[1:-1]] + [hi]
    keep = [
        (max(dl, e), v)
        for i, (dl, (v, e)) in enumerate(zip(deltas, points))
        if e <= 1.5 * dl or i >= len(deltas) - 3
    ]
    return limit_at_zero(*zip(*keep))


# ---------------------------------------------------------------------------
# slack and tautness


def _max_slack(layout, program, k, opts, delta=0.0):
    if layout.n_vars == 0:
        x = np.zeros(0)
        return float(layout.slacks(x)[k]), x
    w = np.zeros(len(layout.lengths))
    w[k] = 1.0
    x, _ = program.solve(cord_weights=w, delta=delta)
    if delta == 0.0:
        x = _refine(layout, x, opts)
    return float(layout.slacks(x)[k]), x


def max_slack(net: Network, cord: Cord | int, opts: SolveOptions = DEFAULT_OPTIONS) -> tuple[float, Configuration]:
    """Largest slack cord ``cord`` can have in any configuration, with a witness."""
    _require_valid(net)
    k = net.cords.index(cord) if isinstance(cord, Cord) else int(cord)
    layout = Layout(net)
    program = _program(layout, opts)
    _find_x(layout, opts, program)
    value, x = _max_slack(layout, program, k, opts)
    return value, layout.configuration(x)


@dataclass(frozen=True)
class CordTautness:
    """``max_slack`` is attained by ``witness``; ``limit`` is its zero-relaxation extrapolation."""

    cord: int
    max_slack: float
    witness: Configuration
    taut: bool
    limit: float


@dataclass(frozen=True)
class TautReport:
    cords: tuple[CordTautness, ...]
    network_taut: bool
    vacuously_taut: bool


def taut_report(net: Network, opts: SolveOptions = DEFAULT_OPTIONS) -> TautReport:
    """Largest slack of every cord; a cord is taut when that slack vanishes.

    When the directly computed slack exceeds ``tol_tense`` the decision
    uses its extrapolation to zero relaxation.
    """
    _require_valid(net)
    layout = Layout(net)
    program = _program(layout, opts)
    _find_x(layout, opts, program)
    records = []
    for k in range(len(net.cords)):
        value, x = _max_slack(layout, program, k, opts)
        limit = value
        if value > opts.tol_tense:
            def relaxed(dl, k=k):
                v, y = _max_slack(layout, program, k, opts, dl)
                return v, _violation(layout, y)

            limit = max(0.0, _relaxed_limit(relaxed))
        records.append(CordTautness(k, value, layout.configuration(x), limit <= opts.tol_tense, limit))
    taut = all(r.taut for r in records)
    vacuous = taut and is_static(net, opts).static
    return TautReport(tuple(records), taut, vacuous)


# ---------------------------------------------------------------------------
# coordinate ranges


@dataclass(frozen=True)
class StaticReport:
    """Coordinate ranges of the free nodes; ``static`` uses their zero-relaxation limits."""

    static: bool
    ranges: dict[str, tuple[tuple[float, float], ...]]
    witnesses: tuple[Configuration, ...] = field(repr=False, default=())


def _extreme(layout, program, direction, opts, delta=0.0) -> np.ndarray:
    """Configuration maximizing ``direction . x``."""
    x, _ = program.solve(linear=-np.asarray(direction, float), delta=delta)
    return _refine(layout, x, opts) if delta == 0.0 else x


def is_static(net: Network, opts: SolveOptions = DEFAULT_OPTIONS) -> StaticReport:
    """Coordinate ranges of every free node over the configuration space.

    The network is static when every range, extrapolated to zero
    relaxation, is below ``2 * tol_feas``.
    """
    _require_valid(net)
    layout = Layout(net)
    program = _program(layout, opts)
    _find_x(layout, opts, program)
    ranges: dict[str, tuple[tuple[float, float], ...]] = {}
    witnesses = []
    static = True
    for nid in layout.free_ids:
        axes = []
        for axis in range(layout.d):
            j = layout.var_index(nid, axis)
            e = np.zeros(layout.n_vars)
            e[j] = 1.0
            hi = _extreme(layout, program, e, opts)
            lo = _extreme(layout, program, -e, opts)
            witnesses += [layout.configuration(hi), layout.configuration(lo)]
            axes.append((float(lo[j]), float(hi[j])))
            if static and hi[j] - lo[j] >= 2 * opts.tol_feas:

                def width(dl, e=e, j=j):
                    top = _extreme(layout, program, e, opts, dl)
                    bottom = _extreme(layout, program, -e, opts, dl)
                    excess = max(_violation(layout, top), _violation(layout, bottom))
                    return float(top[j] - bottom[j]), excess

                if _relaxed_limit(width) >= 2 * opts.tol_feas:
                    static = False
        ranges[nid] = tuple(axes)
    return StaticReport(static, ranges, tuple(witnesses))


def relative_interior_point(
    net: Network, opts: SolveOptions = DEFAULT_OPTIONS, static: StaticReport | None = None
) -> Configuration:
    """Average of coordinate-extreme configurations.

    By convexity this is a configuration; it sits away from the faces the
    extremes lie on, so segment lengths that can be positive are positive.
    """
    if static is not None and static.witnesses:
        return average(static.witnesses)
    _require_valid(net)
    layout = Layout(net)
    program = _program(layout, opts)
    x = _find_x(layout, opts, program)
    if layout.n_vars == 0:
        return layout.configuration(x)
    extremes = []
    for j in range(layout.n_vars):
        e = np.zeros(layout.n_vars)
        e[j] = 1.0
        extremes += [_extreme(layout, program, e, opts), _extreme(layout, program, -e, opts)]
    return average(layout.configuration(y) for y in extremes)


def average(configs) -> Configuration:
    """Uniform average; coordinates equal in every input are copied exactly."""
    configs = list(configs)
    out = {}
    for nid in configs[0].nodes:
        pts = [tuple(c.placement[nid]) for c in configs]
        if all(p == pts[0] for p in pts):
            out[nid] = pts[0]
        else:
            out[nid] = tuple(float(v) for v in np.mean(np.asarray(pts), axis=0))
    return Configuration(out)


def project(
    net: Network,
    target: Configuration,
    opts: SolveOptions = DEFAULT_OPTIONS,
    fixed: dict[tuple[str, int], float] | None = None,
) -> Configuration:
    """Euclidean projection of ``target``'s free coordinates onto the configuration space.

    ``fixed`` pins chosen ``(node, axis)`` coordinates to given values.
    """
    _require_valid(net)
    layout = Layout(net)
    t = layout.flatten(target)
    if layout.n_vars == 0:
        return layout.configuration(t)
    pins = {layout.var_index(nid, ax): v for (nid, ax), v in (fixed or {}).items()}
    x, _ = _program(layout, opts).solve(quadratic=t, fixed=pins)
    return layout.configuration(_refine(layout, x, opts))


# ---------------------------------------------------------------------------
# tense configurations (nonconvex)


def _levenberg_marquardt(residual, jac, x0, max_nfev):
    """MINPACK LM; rows are zero-padded because LM needs at least as many residuals as unknowns."""
    n = len(x0)
    pad = max(0, n - len(residual(x0)))

    def f(x):
        r = residual(x)
        return np.concatenate([r, np.zeros(pad)]) if pad else r

    def J(x):
        j = jac(x)
        return np.vstack([j, np.zeros((pad, n))]) if pad else j

    return least_squares(f, x0, jac=J, method="lm", ftol=1e-15, xtol=1e-15, gtol=1e-15, max_nfev=max_nfev)


def _tense_attempt(layout: Layout, x0: np.ndarray, opts: SolveOptions) -> np.ndarray | None:
    def residual(x):
        return -layout.slacks(x)

    res = _levenberg_marquardt(residual, layout.path_jacobian, x0, opts.max_iterations)
    x = polish(layout, res.x)
    s = layout.slacks(x)
    if s.min() >= -opts.tol_feas and s.max() <= opts.tol_tense:
        return x
    return None


def find_tense_configuration(
    net: Network, opts: SolveOptions = DEFAULT_OPTIONS, start: Configuration | None = None
) -> Configuration | None:
    """Search for a configuration in which every cord is tense.

    Returns ``None`` when all restarts fail.  That is not a proof that no
    tense configuration exists: the equality system is nonconvex.  Restart
    ``r`` draws from its own generator seeded with ``seed + r`` and the
    lowest-index success wins.
    """
    _require_valid(net)
    layout = Layout(net)
    if layout.n_vars == 0:
        x = np.zeros(0)
        s = layout.slacks(x)
        if len(s) and (s.min() < -opts.tol_feas or s.max() > opts.tol_tense):
            return None
        return layout.configuration(x)
    if start is not None:
        x = _tense_attempt(layout, layout.flatten(start), opts)
        if x is not None:
            return layout.configuration(x)
    for r in range(opts.restarts):
        rng = np.random.default_rng(opts.seed + r)
        x = _tense_attempt(layout, initial_point(layout, rng), opts)
        if x is not None:
            return layout.configuration(x)
    return None


def simultaneous_slack_witness(net: Network, witnesses) -> Configuration:
    """Uniform average of configurations; every cord slack in some witness is slack in it.

    Slack means slack beyond ``tol_tense``; smaller slacks are solver noise on tense cords.
    """
    witnesses = list(witnesses)
    if not witnesses:
        raise NetworkError("need at least one witness")
    ids = set(net.node_ids)
    for w in witnesses:
        if set(w.nodes) != ids:
            raise NetworkError("witness does not place exactly the network's nodes")
    reports = [slack_report(net, w) for w in witnesses]
    result = average(witnesses)
    combined = slack_report(net, result)
    for k in range(len(net.cords)):
        if any(not r.cords[k].tense for r in reports):
            assert combined.cords[k].slack > 0, f"cord {k} not slack in the averaged configuration"
    return result
