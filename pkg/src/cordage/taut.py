"""Linear analysis of taut networks.

In a taut network every segment keeps its direction over the whole
configuration space, so positions and segment lengths satisfy a linear
system: ``rho(b) - rho(a) = l * c`` for each segment with fixed unit ``c``,
and the lengths along each cord sum to the cord length.  Its solution set
is the configuration space, and everything here (degrees of freedom,
mobility, the affine relations among chosen nodes) is read off that system
by SVD.

Numerical witnesses of taut networks are only accurate to a fractional
power of the solver tolerance, which would spoil the directions.  Before
reading directions off a witness, :func:`straighten` snaps nearly straight
interior nodes onto their cords by Gauss-Newton.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Configuration, Layout, Network, NetworkError, neighbors
from .solver import DEFAULT_OPTIONS, SolveOptions, relative_interior_point, taut_report

#: segments shorter than this fraction of their cord have no usable direction
DEGENERATE_FRACTION = 1e-6
#: relative singular-value threshold for rank decisions
RANK_TOL = 1e-9
#: interior nodes bending by less than this (radians) are treated as straight
STRAIGHT_ANGLE = 1e-2


class DegenerateWitnessError(NetworkError):
    """A segment of the witness is too short to define a direction."""


class NotTautError(NetworkError):
    pass


# ---------------------------------------------------------------------------
# witnesses


def _straight_joints(layout: Layout, x: np.ndarray) -> list[tuple[int, int, int]]:
    """Consecutive segment pairs ``(s, s+1)`` meeting at a nearly straight interior node."""
    vec = layout.segment_vectors(x)
    norms = np.linalg.norm(vec, axis=1)
    joints = []
    for s in range(len(vec) - 1):
        if layout.seg_cord[s] != layout.seg_cord[s + 1]:
            continue
        if min(norms[s], norms[s + 1]) == 0.0:
            continue
        cos = float(vec[s] @ vec[s + 1]) / (norms[s] * norms[s + 1])
        if abs(cos) >= np.cos(STRAIGHT_ANGLE):
            joints.append((s, s + 1, int(layout.seg_b[s])))
    return joints


def _segment_jacobian(layout: Layout, s: int) -> np.ndarray:
    """d x n_vars matrix mapping free coordinates to segment ``s``'s vector."""
    d = layout.d
    J = np.zeros((d, layout.n_vars))
    for node, sign in ((layout.seg_b[s], 1.0), (layout.seg_a[s], -1.0)):
        nid = layout.ids[node]
        if nid in layout.free_pos:
            k = layout.free_pos[nid] * d
            J[:, k : k + d] += sign * np.eye(d)
    return J


def straighten(
    net: Network, witness: Configuration, tol: float = 1e-13, max_steps: int = 50, rcond: float = 1e-6
) -> Configuration:
    """Tense configuration near ``witness`` with its nearly straight joints made exactly straight.

    Solves ``path(C) = L_C`` for every cord together with the vanishing of
    the wedge product of the two segments at each nearly straight interior
    node, by minimum-norm Gauss-Newton.  The added equations make the
    system regular where path lengths alone are only second-order
    sensitive.  Returns ``witness`` unchanged if the iteration fails.
    """
    layout = Layout(net)
    x0 = layout.flatten(witness)
    if layout.n_vars == 0:
        return witness
    joints = _straight_joints(layout, x0)
    d = layout.d
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    seg_jac = {s: _segment_jacobian(layout, s) for joint in joints for s in joint[:2]}

    def system(x):
        vec = layout.segment_vectors(x)
        rows = [layout.path_lengths(x) - layout.lengths]
        jacs = [layout.path_jacobian(x)]
        for s, t, _ in joints:
            u, v = vec[s], vec[t]
            Ju, Jv = seg_jac[s], seg_jac[t]
            rows.append(np.array([u[i] * v[j] - u[j] * v[i] for i, j in pairs]))
            jacs.append(np.array([v[j] * Ju[i] - v[i] * Ju[j] + u[i] * Jv[j] - u[j] * Jv[i] for i, j in pairs]))
        return np.concatenate(rows), np.vstack(jacs)

    # directions tangent to the solution set have singular values of the
    # order of the witness error; truncation keeps steps off them
    x = x0.copy()
    r, J = system(x)
    for _ in range(max_steps):
        if np.max(np.abs(r)) <= tol:
            break
        step = np.linalg.lstsq(J, r, rcond=rcond)[0]
        for _ in range(30):
            y = x - step
            ry, Jy = system(y)
            if np.linalg.norm(ry) < np.linalg.norm(r):
                break
            step = step / 2
        else:
            break
        x, r, J = y, ry, Jy
    if not np.all(np.isfinite(x)) or np.max(np.abs(r)) > 1e3 * tol or np.max(np.abs(x - x0)) > 1e-2:
        return witness
    return layout.configuration(x)


def taut_witness(net: Network, opts: SolveOptions = DEFAULT_OPTIONS) -> Configuration:
    """A straightened relative-interior configuration, suitable for :func:`build_linear_model`."""
    return straighten(net, relative_interior_point(net, opts))


# ---------------------------------------------------------------------------
# the linear model


@dataclass(frozen=True)
class LinearModel:
    """Linear system satisfied by every configuration of a taut network.

    ``variables`` labels the columns of ``matrix``: ``("coord", node, axis)``
    for free coordinates then ``("length", cord, segment)``.  Solutions of
    ``matrix @ z = rhs`` form ``witness + null_basis @ t``.
    """

    network: Network
    directions: dict[tuple[int, int], np.ndarray]
    variables: list[tuple]
    matrix: np.ndarray
    rhs: np.ndarray
    null_basis: np.ndarray
    witness: np.ndarray
    layout: Layout = field(repr=False)

    @property
    def degrees_of_freedom(self) -> int:
        return self.null_basis.shape[1]

    def columns(self, node: str) -> list[int]:
        if node not in self.layout.index:
            raise NetworkError(f"unknown node {node!r}")
        if node not in self.layout.free_pos:
            return []
        return [self.layout.var_index(node, ax) for ax in range(self.layout.d)]

    def configuration(self, t=None) -> Configuration:
        """Configuration at null-space coordinates ``t`` (the witness when omitted)."""
        z = self.witness if t is None else self.witness + self.null_basis @ np.asarray(t, float)
        return self.layout.configuration(z[: self.layout.n_vars])


def _null_space(A: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    if A.size == 0:
        return np.eye(A.shape[1])
    _, sv, Vt = np.linalg.svd(A)
    rank = int(np.sum(sv > tol * sv[0])) if len(sv) and sv[0] > 0 else 0
    return Vt[rank:].T.copy()


def build_linear_model(
    net: Network,
    witness: Configuration | None = None,
    opts: SolveOptions = DEFAULT_OPTIONS,
    check_taut: bool = True,
) -> LinearModel:
    """Assemble the direction equations of a taut network from a tense witness.

    With no witness one is computed by :func:`taut_witness`.  A given
    witness is straightened first.  ``check_taut=False`` skips the tautness
    test for callers that already know the answer.
    """
    if check_taut and not taut_report(net, opts).network_taut:
        raise NotTautError("network is not taut")
    witness = taut_witness(net, opts) if witness is None else straighten(net, witness)
    layout = Layout(net)
    x = layout.flatten(witness)
    vec = layout.segment_vectors(x)
    norms = np.linalg.norm(vec, axis=1)
    d, n, S = layout.d, layout.n_vars, len(vec)
    position = [0] * S
    for s in range(1, S):
        position[s] = position[s - 1] + 1 if layout.seg_cord[s] == layout.seg_cord[s - 1] else 0
    directions = {}
    for s in range(S):
        k = int(layout.seg_cord[s])
        pinned = all(layout.ids[i] not in layout.free_pos for i in (layout.seg_a[s], layout.seg_b[s]))
        if pinned and norms[s] == 0.0:
            directions[(k, position[s])] = np.eye(d)[0]
            continue
        if norms[s] <= DEGENERATE_FRACTION * layout.lengths[k] and not pinned:
            a, b = layout.ids[layout.seg_a[s]], layout.ids[layout.seg_b[s]]
            raise DegenerateWitnessError(f"segment {a}-{b} of cord {k} has length {norms[s]:.3g} in the witness")
        directions[(k, position[s])] = vec[s] / norms[s]

    variables = [("coord", nid, ax) for nid in layout.free_ids for ax in range(d)]
    variables += [("length", int(layout.seg_cord[s]), position[s]) for s in range(S)]
    A = np.zeros((S * d + len(layout.lengths), n + S))
    b = np.zeros(A.shape[0])
    for s in range(S):
        c = directions[(int(layout.seg_cord[s]), position[s])]
        rows = slice(s * d, (s + 1) * d)
        A[rows, :n] = _segment_jacobian(layout, s)
        A[rows, n + s] = -c
        fixed = np.zeros(d)
        for node, sign in ((layout.seg_b[s], 1.0), (layout.seg_a[s], -1.0)):
            if layout.ids[node] not in layout.free_pos:
                fixed += sign * layout.base[node]
        b[rows] = -fixed
    for s in range(S):
        A[S * d + layout.seg_cord[s], n + s] = 1.0
    b[S * d :] = layout.lengths
    z = np.concatenate([x, norms])
    residual = float(np.max(np.abs(A @ z - b))) if len(b) else 0.0
    if residual > 1e-9:
        raise NetworkError(f"witness violates the linear system by {residual:.3g}; is it tense?")
    return LinearModel(net, directions, variables, A, b, _null_space(A), z, layout)


# ---------------------------------------------------------------------------
# mobility


@dataclass(frozen=True)
class MobilityReport:
    per_node: dict[str, int]
    degrees_of_freedom: int


def _rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(sv > tol))


def mobility(model: LinearModel, node: str) -> int:
    """Dimension of the set of positions ``node`` takes over the configuration space."""
    cols = model.columns(node)
    return _rank(model.null_basis[cols]) if cols else 0


def mobility_report(model: LinearModel) -> MobilityReport:
    per_node = {nid: mobility(model, nid) for nid in model.layout.ids}
    return MobilityReport(per_node, model.degrees_of_freedom)


# ---------------------------------------------------------------------------
# affine relations


@dataclass(frozen=True)
class AffineEquation:
    """``sum(coefficients[(node, axis)] * rho(node)[axis]) == constant``."""

    coefficients: dict[tuple[str, int], float]
    constant: float

    def residual(self, config: Configuration) -> float:
        total = sum(c * float(config[nid][ax]) for (nid, ax), c in self.coefficients.items())
        return total - self.constant

    def __str__(self) -> str:
        terms = " + ".join(f"{c:.6g}*{nid}[{ax}]" for (nid, ax), c in self.coefficients.items())
        return f"{terms} = {self.constant:.6g}"


def _row_echelon(W: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Reduced row echelon form with unit pivots."""
    W = np.array(W, dtype=float)
    rows, cols = W.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(W[r:, c])))
        if abs(W[p, c]) <= tol:
            continue
        W[[r, p]] = W[[p, r]]
        W[r] /= W[r, c]
        for i in range(rows):
            if i != r:
                W[i] -= W[i, c] * W[r]
        r += 1
    W[np.abs(W) < 1e-13] = 0.0
    return W[:r]


def affine_relation(model: LinearModel, nodes: list[str]) -> list[AffineEquation]:
    """Basis of the affine equations the coordinates of ``nodes`` always satisfy.

    The solution set projected onto the selected coordinates is
    ``y0 + P N t``; its equations are the left null space of ``P N``,
    brought to reduced echelon form so each starts with coefficient 1.
    """
    layout = model.layout
    labels, rows, y0 = [], [], []
    k = model.degrees_of_freedom
    for nid in nodes:
        cols = model.columns(nid)
        for ax in range(layout.d):
            labels.append((nid, ax))
            if cols:
                rows.append(model.null_basis[cols[ax]])
                y0.append(model.witness[cols[ax]])
            else:
                rows.append(np.zeros(k))
                y0.append(float(layout.base[layout.index[nid], ax]))
    M = np.array(rows).reshape(len(labels), k)
    if k and M.size:
        U, sv, _ = np.linalg.svd(M)
        rank = int(np.sum(sv > RANK_TOL))
        W = U[:, rank:].T
    else:
        W = np.eye(len(labels))
    equations = []
    for w in _row_echelon(W):
        coeffs = {lab: float(c) for lab, c in zip(labels, w) if c != 0.0}
        equations.append(AffineEquation(coeffs, float(w @ np.array(y0))))
    return equations


# ---------------------------------------------------------------------------
# mobility laws


@dataclass(frozen=True)
class MobilityLawReport:
    """Checks of the two mobility laws.

    ``literal_collinear`` is the collinearity law as usually stated: every
    node with its lower-mobility neighbours.  It fails on product nodes of
    Cartesian gadgets, whose lower-mobility neighbours lie on two
    perpendicular lines.  ``collinear`` checks it only where its proof
    applies, namely where the node can still move with all of those
    neighbours held fixed.
    """

    mobilities: dict[str, int]
    adjacent_differences: list[tuple[str, str, int]]
    collinearity_failures: list[tuple[str, float]]
    literal_failures: list[tuple[str, float]]

    @property
    def adjacent_ok(self) -> bool:
        return not self.adjacent_differences

    @property
    def collinear(self) -> bool:
        return not self.collinearity_failures

    @property
    def literal_collinear(self) -> bool:
        return not self.literal_failures

    @property
    def passed(self) -> bool:
        return self.adjacent_ok and self.collinear


def line_residual(points: np.ndarray) -> float:
    """Largest distance from ``points`` to their best-fit line."""
    P = np.asarray(points, float)
    if len(P) <= 2:
        return 0.0
    Q = P - P.mean(axis=0)
    _, _, Vt = np.linalg.svd(Q)
    along = np.outer(Q @ Vt[0], Vt[0])
    return float(np.max(np.linalg.norm(Q - along, axis=1)))


def check_mobility_laws(net: Network, model: LinearModel, tol: float = 1e-8) -> MobilityLawReport:
    mob = mobility_report(model).per_node
    adj = neighbors(net)
    witness = model.configuration()
    diffs = []
    for x in sorted(adj):
        for y in sorted(adj[x]):
            if x < y and abs(mob[x] - mob[y]) > 1:
                diffs.append((x, y, mob[x] - mob[y]))
    literal, corrected = [], []
    for x in sorted(adj):
        lower = sorted(y for y in adj[x] if mob[y] < mob[x])
        if not lower:
            continue
        res = line_residual(np.array([witness[x]] + [witness[y] for y in lower]))
        if res >= tol:
            literal.append((x, res))
        cols = [c for y in lower for c in model.columns(y)]
        N = model.null_basis
        if cols:
            N = N @ _null_space(N[cols])
        if _rank(N[model.columns(x)]) > 0 and res >= tol:
            corrected.append((x, res))
    return MobilityLawReport(mob, diffs, corrected, literal)
