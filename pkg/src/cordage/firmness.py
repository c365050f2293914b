"""Firmness: how far lengthening every cord by eps lets a network stray.

A network is firm when every configuration of the eps-expanded network
lies within ``k * eps`` of some configuration of the original, in the
max-over-nodes distance.  The displacement measured here is that one-sided
Hausdorff distance, bounded below by sampling: each sampled configuration
of the expanded network maximizes a linear functional of one node's
position (a support point of the convex configuration space), and its
distance to the original configuration space is computed exactly.  Taut
networks with a movable node sag like ``sqrt(eps)`` or slower; firm ones
move linearly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Configuration, Layout, Network, NetworkError
from .solver import DEFAULT_OPTIONS, InfeasibleError, SolveOptions, _program, _require_valid

EPSILONS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
FIRM_EXPONENT = 0.9
NOT_FIRM_EXPONENT = 0.6


def expand(net: Network, eps: float) -> Network:
    """The network with every cord lengthened by ``eps``."""
    if not eps >= 0:
        raise NetworkError(f"expansion must be nonnegative, got {eps}")
    return net.with_lengths([c.length + eps for c in net.cords])


def config_distance(rho: Configuration, sigma: Configuration) -> float:
    """Largest displacement of any node between two configurations."""
    if set(rho.nodes) != set(sigma.nodes):
        raise NetworkError("configurations place different nodes")
    return max((float(np.linalg.norm(rho[n] - sigma[n])) for n in rho.nodes), default=0.0)


def directions(d: int, count: int) -> np.ndarray:
    """Deterministic, evenly spread unit vectors: a circle grid or a Fibonacci sphere."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    k = np.arange(count)
    if d == 2:
        a = 2 * np.pi * k / count
        return np.column_stack([np.cos(a), np.sin(a)])
    if d == 3:
        z = 1 - (2 * k + 1) / count
        r = np.sqrt(1 - z * z)
        phi = np.pi * (3 - np.sqrt(5)) * k
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise NetworkError(f"no direction set for dimension {d}")


def default_direction_samples(d: int) -> int:
    return 64 if d <= 2 else 256


@dataclass(frozen=True)
class Displacement:
    value: float
    expanded: Configuration
    nearest: Configuration


def max_displacement(
    net: Network,
    eps: float,
    direction_samples: int | None = None,
    opts: SolveOptions = DEFAULT_OPTIONS,
    nodes: list[str] | None = None,
    reference: Configuration | None = None,
) -> Displacement:
    """Lower bound on how far configurations of ``expand(net, eps)`` get from ``net``.

    For every free node in ``nodes`` (default: all) and every sampled
    direction, a support point of the expanded configuration space is
    found.  Its distance is to the nearest configuration of the original
    network in the max-over-nodes metric (a second-order-cone program of
    its own), or to the fixed configuration ``reference`` when one is
    given.  Ties keep the first maximum.
    """
    _require_valid(net)
    if not eps >= 0:
        raise NetworkError(f"expansion must be nonnegative, got {eps}")
    layout = Layout(net)
    program = _program(layout, opts)
    nodes = layout.free_ids if nodes is None else list(nodes)
    count = direction_samples or default_direction_samples(layout.d)
    best = None
    try:
        base = program.solve(delta=0.0)[0]
    except InfeasibleError:
        raise NetworkError("network has no configuration") from None
    if layout.n_vars == 0 or not nodes:
        config = layout.configuration(base)
        return Displacement(0.0, config, config)
    for nid in nodes:
        cols = [layout.var_index(nid, ax) for ax in range(layout.d)]
        for u in directions(layout.d, count):
            c = np.zeros(layout.n_vars)
            c[cols] = -u
            x, _ = program.solve(linear=c, delta=eps)
            far = layout.configuration(x)
            if reference is None:
                near = layout.configuration(program.solve(nearest=x)[0])
            else:
                near = reference
            value = config_distance(far, near)
            if best is None or value > best.value:
                best = Displacement(value, far, near)
    return best


@dataclass(frozen=True)
class FirmnessEstimate:
    """Fit ``displacement ~ k * eps**exponent``.

    A network that never moves gets exponent ``inf`` and ``k = 0``.
    """

    epsilons: tuple[float, ...]
    displacements: tuple[float, ...]
    exponent: float
    k: float
    classification: str


def classify(exponent: float) -> str:
    if exponent >= FIRM_EXPONENT:
        return "firm"
    if exponent <= NOT_FIRM_EXPONENT:
        return "notFirm"
    return "inconclusive"


def fit_power_law(epsilons, displacements, floor: float = 1e-12) -> tuple[float, float]:
    """Least-squares line through ``(log eps, log displacement)``; returns ``(exponent, k)``."""
    e = np.asarray(epsilons, float)
    v = np.asarray(displacements, float)
    keep = v > floor
    if keep.sum() < 2:
        return float("inf"), 0.0
    slope, intercept = np.polyfit(np.log(e[keep]), np.log(v[keep]), 1)
    return float(slope), float(np.exp(intercept))


def firmness_estimate(
    net: Network,
    opts: SolveOptions = DEFAULT_OPTIONS,
    direction_samples: int | None = None,
    nodes: list[str] | None = None,
    epsilons=EPSILONS,
) -> FirmnessEstimate:
    """Displacements over the ``eps`` grid, their fitted exponent and the verdict."""
    eps = tuple(sorted((float(e) for e in epsilons), reverse=True))
    values = tuple(max_displacement(net, e, direction_samples, opts, nodes).value for e in eps)
    exponent, k = fit_power_law(eps, values)
    return FirmnessEstimate(eps, values, exponent, k, classify(exponent))
