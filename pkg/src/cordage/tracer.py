"""Curves drawn by a network: tense continuation and boundary arcs.

:func:`trace_tense` follows the tense configurations as one coordinate is
driven across a range, solving the path-length equalities by Newton's
method warm-started from the previous sample.  :func:`trace_boundary`
maximizes a traced node's other coordinate over the (convex)
configuration space for each driver value, which gives an arc of the
boundary of that node's region.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Configuration, Layout, Network, NetworkError, slack_report
from .solver import (
    DEFAULT_OPTIONS,
    ConvergenceError,
    InfeasibleError,
    SolveOptions,
    _refine,
    _program,
    _require_valid,
    initial_point,
)

NEWTON_TOL = 1e-12
NEWTON_STEPS = 100
#: a step is a jump when it exceeds this multiple of the median step
JUMP_FACTOR = 20.0


class TraceError(NetworkError):
    pass


@dataclass(frozen=True)
class TraceSample:
    parameter: float
    point: np.ndarray
    configuration: Configuration = field(repr=False)
    active_cords: frozenset[int]
    local_dimension: int | None = None


@dataclass(frozen=True)
class TraceResult:
    """Samples in driver order.

    ``complete`` is false when tense tracing stopped early (a fold, or
    Newton failure).  ``gaps`` lists driver values with no feasible
    configuration.  ``discontinuities`` indexes samples that jumped from
    their predecessor by more than ``JUMP_FACTOR`` median steps;
    ``lipschitz`` is the largest ratio of point motion to driver step
    among the other samples.
    """

    samples: list[TraceSample]
    max_residual: float
    complete: bool = True
    gaps: list[float] = field(default_factory=list)
    discontinuities: list[int] = field(default_factory=list)
    lipschitz: float = 0.0

    @property
    def points(self) -> np.ndarray:
        if not self.samples:
            return np.zeros((0, 0))
        return np.array([s.point for s in self.samples])

    @property
    def parameters(self) -> np.ndarray:
        return np.array([s.parameter for s in self.samples])


def _continuity(samples: list[TraceSample]) -> tuple[list[int], float]:
    if len(samples) < 2:
        return [], 0.0
    P = np.array([s.point for s in samples])
    t = np.array([s.parameter for s in samples])
    rate = np.linalg.norm(np.diff(P, axis=0), axis=1) / np.maximum(np.abs(np.diff(t)), 1e-300)
    cutoff = JUMP_FACTOR * max(float(np.median(rate)), 1e-12)
    jumps = [i + 1 for i in np.flatnonzero(rate > cutoff)]
    smooth = rate[rate <= cutoff]
    return jumps, float(smooth.max()) if len(smooth) else 0.0


def _pinned_system(layout: Layout, j: int):
    def system(x, value):
        r = np.append(layout.path_lengths(x) - layout.lengths, x[j] - value)
        J = np.vstack([layout.path_jacobian(x), np.eye(layout.n_vars)[j]])
        return r, J

    return system


def newton(system, x: np.ndarray, value: float, tol: float = NEWTON_TOL, max_steps: int = NEWTON_STEPS):
    """Damped minimum-norm Newton on ``system(x, value) -> (r, J)``; ``None`` on failure."""
    r, J = system(x, value)
    norm = np.linalg.norm(r)
    for _ in range(max_steps):
        if norm <= tol:
            return x
        step = np.linalg.lstsq(J, r, rcond=None)[0]
        lam = 1.0
        while lam > 1e-6:
            y = x - lam * step
            ry, Jy = system(y, value)
            ny = np.linalg.norm(ry)
            if ny < norm:
                break
            lam /= 2
        else:
            return None
        x, r, J, norm = y, ry, Jy, ny
    return x if norm <= tol else None


def local_tense_dimension(net: Network, config: Configuration, tol: float = 1e-8) -> int:
    """Nullity of the path-length Jacobian at ``config``."""
    layout = Layout(net)
    J = layout.path_jacobian(layout.flatten(config))
    if J.size == 0:
        return layout.n_vars
    sv = np.linalg.svd(J, compute_uv=False)
    return layout.n_vars - int(np.sum(sv > tol * max(sv[0], 1.0)))


def tense_start(
    net: Network, driver: tuple[str, int], value: float, opts: SolveOptions = DEFAULT_OPTIONS
) -> Configuration:
    """A tense configuration with the driver coordinate at ``value``, by multistart Newton."""
    _require_valid(net)
    layout = Layout(net)
    system = _pinned_system(layout, layout.var_index(*driver))
    for r in range(opts.restarts):
        x0 = initial_point(layout, np.random.default_rng(opts.seed + r))
        x = newton(system, x0, value, max_steps=opts.max_iterations)
        if x is not None:
            return layout.configuration(x)
    raise TraceError(f"no tense configuration found with {driver[0]}[{driver[1]}] = {value}")


def trace_tense(
    net: Network,
    traced: str,
    driver: tuple[str, int],
    interval: tuple[float, float],
    steps: int,
    start: Configuration,
    opts: SolveOptions = DEFAULT_OPTIONS,
) -> TraceResult:
    """Follow tense configurations while ``driver = (node, axis)`` sweeps ``interval``.

    ``steps`` samples are taken on a uniform grid including both ends.
    The first sample is found by Newton from ``start``.
    """
    _require_valid(net)
    if steps < 1:
        raise ValueError("steps must be positive")
    layout = Layout(net)
    j = layout.var_index(*driver)
    if traced not in layout.index:
        raise NetworkError(f"unknown node {traced!r}")
    if not slack_report(net, start, opts.tol_tense, opts.tol_feas).tense:
        raise TraceError("start configuration is not tense")
    x = layout.flatten(start)
    J = layout.path_jacobian(x)
    rank = np.linalg.matrix_rank(J, tol=1e-9) if J.size else 0
    if np.linalg.matrix_rank(np.vstack([J, np.eye(layout.n_vars)[j]]), tol=1e-9) == rank:
        raise TraceError(
            f"driver {driver[0]}[{driver[1]}] is locally fixed by the cords at the start "
            f"(path-length Jacobian rank {rank})"
        )
    system = _pinned_system(layout, j)
    samples, worst, complete = [], 0.0, True
    for value in np.linspace(interval[0], interval[1], steps):
        y = newton(system, x, float(value))
        if y is None:
            complete = False
            break
        x = y
        config = layout.configuration(x)
        resid = np.abs(layout.path_lengths(x) - layout.lengths)
        worst = max(worst, float(resid.max()) if len(resid) else 0.0)
        samples.append(
            TraceSample(
                float(value),
                np.array(config[traced]),
                config,
                frozenset(range(len(net.cords))),
                local_tense_dimension(net, config),
            )
        )
    jumps, lip = _continuity(samples)
    return TraceResult(samples, worst, complete, [], jumps, lip)


def trace_boundary(
    net: Network,
    traced: str,
    driver: tuple[str, int],
    interval: tuple[float, float],
    steps: int,
    side: int = 1,
    opts: SolveOptions = DEFAULT_OPTIONS,
) -> TraceResult:
    """Upper (``side=1``) or lower (``side=-1``) boundary arc of ``traced``'s region.

    For each driver value the other coordinate of ``traced`` is pushed as
    far as the configuration space allows.  Values admitting no
    configuration are recorded in ``gaps``.  ``active_cords`` holds the
    cords with slack at most ``tol_tense`` in the optimum.
    """
    _require_valid(net)
    if net.dimension != 2:
        raise NetworkError("boundary tracing is planar")
    if side not in (1, -1):
        raise ValueError("side must be 1 or -1")
    layout = Layout(net)
    j = layout.var_index(*driver)
    other = layout.var_index(traced, 1 - driver[1])
    program = _program(layout, opts)
    objective = np.zeros(layout.n_vars)
    objective[other] = -float(side)
    samples, gaps, worst = [], [], 0.0
    for value in np.linspace(interval[0], interval[1], steps):
        try:
            x, _ = program.solve(linear=objective, fixed={j: float(value)})
        except (InfeasibleError, ConvergenceError):
            gaps.append(float(value))
            continue
        x = _refine(layout, x, opts)
        x[j] = value
        slack = layout.slacks(x)
        worst = max(worst, max(0.0, -float(slack.min())))
        config = layout.configuration(x)
        active = frozenset(int(k) for k in np.flatnonzero(slack <= opts.tol_tense))
        samples.append(TraceSample(float(value), np.array(config[traced]), config, active))
    jumps, lip = _continuity(samples)
    return TraceResult(samples, worst, True, gaps, jumps, lip)


def residual_against_implicit_curve(trace: TraceResult, f) -> float:
    """``max |f(point)|`` over the samples."""
    if not trace.samples:
        return 0.0
    return max(abs(float(f(np.asarray(s.point)))) for s in trace.samples)
