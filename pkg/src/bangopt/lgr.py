"""Legendre-Gauss-Radau collocation primitives.

LGR quadrature rules (the left endpoint -1 is a node, the right endpoint
+1 is a non-collocated support point), differentiation matrices for the
Lagrange interpolant on nodes + {+1}, barycentric interpolation, and the
affine map between the canonical interval [-1, +1] and a time span.

An N-point rule integrates polynomials up to degree 2N-2 exactly; the
N x (N+1) differentiation matrix is exact for polynomials up to degree N.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MAX_ORDER",
    "MIN_INTERVAL_POINTS",
    "MAX_INTERVAL_POINTS",
    "QuadratureRule",
    "DifferentiationMatrix",
    "MeshLayout",
    "lgr_rule",
    "diff_matrix",
    "interpolate",
    "affine_to_time",
    "time_to_tau",
    "barycentric_weights",
    "barycentric_interpolate",
]

MAX_ORDER = 64
MIN_INTERVAL_POINTS = 3
MAX_INTERVAL_POINTS = 10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class QuadratureRule:
    """An N-point LGR rule on [-1, +1).

    ``nodes`` are the roots of P_{N-1} + P_N (strictly increasing,
    nodes[0] = -1, all nodes < +1).  ``weights`` are the matching
    quadrature weights (positive, summing to 2).  ``support_node`` is
    the non-collocated endpoint +1 appended when interpolating states.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    support_node: float = 1.0

    @functools.cached_property
    def support_points(self) -> np.ndarray:
        """Nodes plus the non-collocated endpoint (N+1 points)."""
        return _readonly(np.append(self.nodes, self.support_node))

    @functools.cached_property
    def support_bary(self) -> np.ndarray:
        """Barycentric weights for the support grid."""
        return _readonly(barycentric_weights(self.support_points))

    @functools.cached_property
    def node_bary(self) -> np.ndarray:
        """Barycentric weights for the collocation nodes alone."""
        return _readonly(barycentric_weights(self.nodes))


@dataclass(frozen=True)
class DifferentiationMatrix:
    """Derivative of the support-grid Lagrange basis at the nodes.

    ``entries[l, j] = dL_j/dtau`` evaluated at node l, for the basis on
    the N+1 support points (nodes plus +1).  Rows sum to zero exactly.
    """

    rows: int
    cols: int
    entries: np.ndarray

    @property
    def last_column(self) -> np.ndarray:
        """Column multiplying the non-collocated endpoint value."""
        return self.entries[:, -1]


@dataclass(frozen=True)
class MeshLayout:
    """Partition of [-1, +1] into K intervals with per-interval orders.

    ``boundaries`` holds T_0 < ... < T_K with T_0 = -1 and T_K = +1;
    ``points`` holds the collocation count N_k of each interval, with
    3 <= N_k <= 10.
    """

    boundaries: np.ndarray
    points: tuple[int, ...]

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=float)
        if b.ndim != 1 or b.size < 2:
            raise ValueError("mesh needs at least one interval")
        if not np.all(np.diff(b) > 0):
            raise ValueError("mesh boundaries must be strictly increasing")
        if abs(b[0] + 1.0) > 1e-12 or abs(b[-1] - 1.0) > 1e-12:
            raise ValueError("mesh must span [-1, +1]")
        b[0], b[-1] = -1.0, 1.0
        pts = tuple(int(n) for n in self.points)
        if len(pts) != b.size - 1:
            raise ValueError("need one point count per interval")
        for n in pts:
            if not MIN_INTERVAL_POINTS <= n <= MAX_INTERVAL_POINTS:
                raise ValueError(
                    f"points per interval must lie in "
                    f"[{MIN_INTERVAL_POINTS}, {MAX_INTERVAL_POINTS}], got {n}"
                )
        object.__setattr__(self, "boundaries", _readonly(b))
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, n_intervals: int, n_points: int) -> "MeshLayout":
        return cls(np.linspace(-1.0, 1.0, n_intervals + 1), (n_points,) * n_intervals)

    @property
    def n_intervals(self) -> int:
        return len(self.points)

    @property
    def n_collocation(self) -> int:
        return sum(self.points)

    def interval(self, k: int) -> tuple[float, float]:
        return float(self.boundaries[k]), float(self.boundaries[k + 1])


def _radau_nodes(n: int) -> np.ndarray:
    """Roots of P_{n-1} + P_n by Newton iteration.

    Interior roots start from Chebyshev-type guesses; the identity
    (1-x)(P'_{n-1}+P'_n) = n(P_{n-1}-P_n) turns each Newton step into
    x - (1-x)(P_{n-1}+P_n) / (n(P_{n-1}-P_n)).
    """
    if n == 1:
        return np.array([-1.0])
    x = -np.cos(2.0 * np.pi * np.arange(n) / (2 * n - 1))
    x[0] = -1.0
    p = np.empty((n - 1, n + 1))
    for _ in range(100):
        p[:, 0] = 1.0
        p[:, 1] = x[1:]
        for k in range(1, n):
            p[:, k + 1] = ((2 * k + 1) * x[1:] * p[:, k] - k * p[:, k - 1]) / (k + 1)
        dx = (1.0 - x[1:]) / n * (p[:, n - 1] + p[:, n]) / (p[:, n - 1] - p[:, n])
        x[1:] -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    return x


def _legendre(x: np.ndarray, n: int) -> np.ndarray:
    """P_n(x) by the three-term recurrence."""
    pm, pk = np.ones_like(x), np.asarray(x, dtype=float).copy()
    if n == 0:
        return pm
    for k in range(1, n):
        pm, pk = pk, ((2 * k + 1) * x * pk - k * pm) / (k + 1)
    return pk


@functools.lru_cache(maxsize=None)
def lgr_rule(n: int) -> QuadratureRule:
    """Build (and cache) the N-point LGR rule.

    Weights: w_1 = 2/N^2 at the endpoint node and
    w_i = (1 - x_i) / (N P_{N-1}(x_i))^2 at interior nodes.
    """
    n = int(n)
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"rule order must lie in [1, {MAX_ORDER}], got {n}")
    x = _radau_nodes(n)
    w = np.empty(n)
    w[0] = 2.0 / n**2
    if n > 1:
        w[1:] = (1.0 - x[1:]) / (n * _legendre(x[1:], n - 1)) ** 2
    return QuadratureRule(order=n, nodes=_readonly(x), weights=_readonly(w))


def barycentric_weights(points: np.ndarray) -> np.ndarray:
    """Barycentric weights 1 / prod_{k != j} (x_j - x_k)."""
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None] - pts[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def diff_matrix(rule: QuadratureRule) -> DifferentiationMatrix:
    """Differentiation matrix on the support grid, rows at the nodes.

    Built from barycentric weights; the diagonal is the negative row sum
    so each row sums to zero exactly.
    """
    pts = rule.support_points
    v = rule.support_bary
    m = pts.size
    with np.errstate(divide="ignore", invalid="ignore"):
        full = (v[None, :] / v[:, None]) / (pts[:, None] - pts[None, :])
    np.fill_diagonal(full, 0.0)
    np.fill_diagonal(full, -full.sum(axis=1))
    return DifferentiationMatrix(rows=rule.order, cols=m, entries=_readonly(full[: rule.order]))


def barycentric_interpolate(points, bary, values, query):
    """Second-form barycentric evaluation of the interpolant.

    ``values`` may be (n,) or (n, k); ``query`` a scalar or (q,) array.
    Exact at the interpolation points.
    """
    pts = np.asarray(points, dtype=float)
    vals = np.asarray(values, dtype=float)
    q = np.asarray(query, dtype=float)
    scalar_q = q.ndim == 0
    q1 = np.atleast_1d(q)
    d = q1[:, None] - pts[None, :]
    hit = d == 0.0
    d = np.where(hit, 1.0, d)
    c = bary[None, :] / d
    num = c @ vals
    den = c.sum(axis=1)
    if vals.ndim == 1:
        out = num / den
        exact = hit.any(axis=1)
        if exact.any():
            out[exact] = vals[hit[exact].argmax(axis=1)]
    else:
        out = num / den[:, None]
        exact = hit.any(axis=1)
        if exact.any():
            out[exact] = vals[hit[exact].argmax(axis=1)]
    return (out[0] if scalar_q else out)


def interpolate(support_values, rule: QuadratureRule, query):
    """Evaluate the support-grid interpolant at ``query`` in [-1, 1]."""
    vals = np.asarray(support_values, dtype=float)
    if vals.shape[0] != rule.order + 1:
        raise ValueError("expected one value per support point")
    return barycentric_interpolate(rule.support_points, rule.support_bary, vals, query)


def affine_to_time(tau, t_start: float, t_end: float):
    """Map tau in [-1, 1] to t in [t_start, t_end]."""
    if not t_end > t_start:
        raise ValueError(f"need t_end > t_start, got [{t_start}, {t_end}]")
    return 0.5 * (t_end - t_start) * tau + 0.5 * (t_end + t_start)


def time_to_tau(t, t_start: float, t_end: float):
    """Inverse of :func:`affine_to_time`."""
    if not t_end > t_start:
        raise ValueError(f"need t_end > t_start, got [{t_start}, {t_end}]")
    return 2.0 * (t - t_start) / (t_end - t_start) - 1.0
