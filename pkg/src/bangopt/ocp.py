"""Single-phase Bolza problems and their multi-domain reformulations.

A :class:`BolzaProblem` packages the cost, dynamics, path and boundary
constraints, and bounds of a continuous optimal control problem.  All
callables are written against a generic scalar so the same definition
serves residual evaluation, vectorized evaluation over many points, and
hyper-dual derivative probing.

A :class:`MultiDomainProblem` splits the horizon at movable switch
times and may pin individual control components to a constant limit in
each domain.  ``Q = 1`` with no switch parameters recovers the plain
single-domain problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .lgr import MeshLayout

__all__ = [
    "Guess",
    "BolzaProblem",
    "SwitchParam",
    "MultiDomainProblem",
    "DomainSolution",
    "CollocatedSolution",
    "validate",
    "as_single_domain",
]


@dataclass(frozen=True)
class Guess:
    """Coarse profile used to seed the first solve.

    ``states`` rows are samples at equally spaced times on [t0, tf];
    ``controls`` likewise (or None for midpoint-of-bounds controls).
    """

    t0: float
    tf: float
    states: np.ndarray
    controls: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "states", np.atleast_2d(np.asarray(self.states, dtype=float)))
        if self.controls is not None:
            object.__setattr__(self, "controls", np.atleast_2d(np.asarray(self.controls, dtype=float)))

    def state_at(self, t) -> np.ndarray:
        """Linear interpolation of the state profile."""
        ts = np.linspace(self.t0, self.tf, self.states.shape[0])
        return np.stack([np.interp(t, ts, self.states[:, m]) for m in range(self.states.shape[1])], axis=-1)

    def control_at(self, t) -> Optional[np.ndarray]:
        if self.controls is None:
            return None
        ts = np.linspace(self.t0, self.tf, self.controls.shape[0])
        return np.stack([np.interp(t, ts, self.controls[:, m]) for m in range(self.controls.shape[1])], axis=-1)


@dataclass(frozen=True)
class BolzaProblem:
    """Continuous optimal control problem in Bolza form.

    Callables:
      - ``mayer(y0, t0, yf, tf)`` -> scalar endpoint cost (None for 0)
      - ``lagrangian(y, u, t)`` -> scalar integrand (None for 0)
      - ``dynamics(y, u, t)`` -> sequence of n_y state derivatives
      - ``path(y, u, t)`` -> sequence of n_c path constraint values
      - ``boundary(y0, t0, yf, tf)`` -> sequence of n_b boundary values

    ``y`` and ``u`` are sequences of scalars; the scalars may be floats,
    numpy arrays (vectorized evaluation), or hyper-duals (derivatives).
    """

    n_y: int
    n_u: int
    dynamics: Callable
    boundary: Callable
    b_min: np.ndarray
    b_max: np.ndarray
    control_lower: np.ndarray
    control_upper: np.ndarray
    guess: Guess
    t0_bounds: tuple[float, float]
    tf_bounds: tuple[float, float]
    mayer: Optional[Callable] = None
    lagrangian: Optional[Callable] = None
    n_c: int = 0
    path: Optional[Callable] = None
    c_min: Optional[np.ndarray] = None
    c_max: Optional[np.ndarray] = None
    state_lower: Optional[np.ndarray] = None
    state_upper: Optional[np.ndarray] = None
    name: str = "problem"

    def __post_init__(self):
        for attr in ("b_min", "b_max", "control_lower", "control_upper"):
            object.__setattr__(self, attr, np.asarray(getattr(self, attr), dtype=float))
        for attr in ("c_min", "c_max", "state_lower", "state_upper"):
            v = getattr(self, attr)
            if v is not None:
                object.__setattr__(self, attr, np.asarray(v, dtype=float))
        if self.b_min.shape != self.b_max.shape:
            raise ValueError("boundary bounds must have matching shapes")
        if self.control_lower.shape != (self.n_u,) or self.control_upper.shape != (self.n_u,):
            raise ValueError("control bounds must have one entry per control")
        if self.n_c and (self.path is None or self.c_min is None or self.c_max is None):
            raise ValueError("path constraints declared without callable or bounds")
        if not self.t0_bounds[0] <= self.t0_bounds[1]:
            raise ValueError("t0 bounds must satisfy min <= max")
        if not self.tf_bounds[0] <= self.tf_bounds[1]:
            raise ValueError("tf bounds must satisfy min <= max")

    @property
    def n_b(self) -> int:
        return self.b_min.size

    def mayer_value(self, y0, t0, yf, tf):
        return self.mayer(y0, t0, yf, tf) if self.mayer is not None else 0.0

    def lagrangian_value(self, y, u, t):
        return self.lagrangian(y, u, t) if self.lagrangian is not None else 0.0


@dataclass(frozen=True)
class SwitchParam:
    """One movable domain boundary: initial guess and bracketing box."""

    guess: float
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("switch bracket must have positive width")
        if not self.lower <= self.guess <= self.upper:
            raise ValueError("switch guess must lie inside its bracket")


@dataclass(frozen=True)
class MultiDomainProblem:
    """A Bolza problem split into Q = n_s + 1 domains at movable switches.

    ``fixed_controls[d]`` maps a control index to the constant value it
    is pinned to inside domain d; absent indices stay free.
    """

    base: BolzaProblem
    switch_params: tuple[SwitchParam, ...] = ()
    fixed_controls: tuple[dict, ...] = ({},)

    def __post_init__(self):
        object.__setattr__(self, "switch_params", tuple(self.switch_params))
        object.__setattr__(self, "fixed_controls", tuple(dict(d) for d in self.fixed_controls))
        if len(self.fixed_controls) != self.n_domains:
            raise ValueError("need one fixed-control map per domain")
        prev_hi = None
        for sp in self.switch_params:
            if prev_hi is not None and sp.lower < prev_hi - 1e-15:
                raise ValueError("switch brackets must be ordered and non-overlapping")
            prev_hi = sp.upper
        for dmap in self.fixed_controls:
            for i, v in dmap.items():
                if not 0 <= i < self.base.n_u:
                    raise ValueError(f"fixed control index {i} out of range")
                lo, hi = self.base.control_lower[i], self.base.control_upper[i]
                if not lo <= v <= hi:
                    raise ValueError(f"fixed control value {v} outside bounds of u[{i}]")

    @property
    def n_switches(self) -> int:
        return len(self.switch_params)

    @property
    def n_domains(self) -> int:
        return len(self.switch_params) + 1


@dataclass
class DomainSolution:
    """Trajectory data for one domain at its N+1 discretization points.

    ``states``/``costates`` have a row per support point (the last row
    is the non-collocated endpoint); ``controls`` one per collocation
    point.  ``weights`` are the domain-level quadrature weights.
    """

    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    costates: np.ndarray
    mesh: MeshLayout
    weights: np.ndarray

    @property
    def n_collocation(self) -> int:
        return self.controls.shape[0]


@dataclass
class CollocatedSolution:
    """Solved trajectories, costate estimates, and solve metadata."""

    domains: list[DomainSolution]
    t0: float
    tf: float
    switch_times: tuple[float, ...]
    objective: float
    status: str
    nlp_result: object = None

    @property
    def n_domains(self) -> int:
        return len(self.domains)

    @property
    def total_collocation(self) -> int:
        return sum(d.n_collocation for d in self.domains)

    def domain_bounds(self, d: int) -> tuple[float, float]:
        edges = (self.t0,) + self.switch_times + (self.tf,)
        return edges[d], edges[d + 1]

    def collocation_times(self) -> np.ndarray:
        return np.concatenate([d.times[:-1] for d in self.domains])

    def sample_state(self, t) -> np.ndarray:
        """Piecewise-polynomial state evaluation at times t."""
        from . import lgr

        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((t_arr.size, self.domains[0].states.shape[1]))
        edges = (self.t0,) + self.switch_times + (self.tf,)
        for q, tq in enumerate(t_arr):
            d = min(max(np.searchsorted(edges, tq, side="right") - 1, 0), self.n_domains - 1)
            dom = self.domains[d]
            a, b = edges[d], edges[d + 1]
            tau = lgr.time_to_tau(min(max(tq, a), b), a, b)
            mesh = dom.mesh
            k = min(max(np.searchsorted(mesh.boundaries, tau, side="right") - 1, 0), mesh.n_intervals - 1)
            ta, tb = mesh.interval(k)
            rule = lgr.lgr_rule(mesh.points[k])
            local = lgr.time_to_tau(tau, ta, tb) if tb > ta else -1.0
            off = sum(mesh.points[:k])
            vals = dom.states[off : off + mesh.points[k] + 1]
            out[q] = lgr.barycentric_interpolate(rule.support_points, rule.support_bary, vals, local)
        return out[0] if np.isscalar(t) or np.asarray(t).ndim == 0 else out

    def sample_control(self, t) -> np.ndarray:
        """Piecewise-polynomial control evaluation at times t."""
        from . import lgr

        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((t_arr.size, self.domains[0].controls.shape[1]))
        edges = (self.t0,) + self.switch_times + (self.tf,)
        for q, tq in enumerate(t_arr):
            d = min(max(np.searchsorted(edges, tq, side="right") - 1, 0), self.n_domains - 1)
            dom = self.domains[d]
            a, b = edges[d], edges[d + 1]
            tau = lgr.time_to_tau(min(max(tq, a), b), a, b)
            mesh = dom.mesh
            k = min(max(np.searchsorted(mesh.boundaries, tau, side="right") - 1, 0), mesh.n_intervals - 1)
            ta, tb = mesh.interval(k)
            rule = lgr.lgr_rule(mesh.points[k])
            local = lgr.time_to_tau(tau, ta, tb) if tb > ta else -1.0
            off = sum(mesh.points[:k])
            vals = dom.controls[off : off + mesh.points[k]]
            out[q] = lgr.barycentric_interpolate(rule.nodes, rule.node_bary, vals, local)
        return out[0] if np.isscalar(t) or np.asarray(t).ndim == 0 else out


def _guess_point(problem: BolzaProblem):
    """Representative (y, u, t) plus endpoint data from the guess."""
    g = problem.guess
    y = [float(v) for v in g.states[0]]
    if g.controls is not None:
        u = [float(v) for v in g.controls[0]]
    else:
        lo = np.where(np.isfinite(problem.control_lower), problem.control_lower, 0.0)
        hi = np.where(np.isfinite(problem.control_upper), problem.control_upper, 0.0)
        u = [float(v) for v in 0.5 * (lo + hi)]
    y0 = [float(v) for v in g.states[0]]
    yf = [float(v) for v in g.states[-1]]
    return y, u, g.t0, y0, yf, g.tf


def validate(problem: BolzaProblem) -> list[str]:
    """Dimensional and bound checks; an empty list means well-formed."""
    findings: list[str] = []
    y, u, t, y0, yf, tf = _guess_point(problem)
    if len(y) != problem.n_y:
        findings.append(f"guess: expected {problem.n_y} state components, got {len(y)}")
        return findings
    if len(u) != problem.n_u:
        findings.append(f"guess: expected {problem.n_u} control components, got {len(u)}")
        return findings

    def check(nameit, fn, nexp):
        try:
            out = np.atleast_1d(np.asarray(fn(), dtype=float))
        except Exception as exc:  # surfaced, not raised: validate reports
            findings.append(f"{nameit}: evaluation failed ({exc})")
            return
        if out.size != nexp:
            findings.append(f"{nameit}: expected {nexp} values, got {out.size}")

    check("dynamics", lambda: problem.dynamics(y, u, t), problem.n_y)
    check("boundary", lambda: problem.boundary(y0, t, yf, tf), problem.n_b)
    if problem.lagrangian is not None:
        check("lagrangian", lambda: problem.lagrangian(y, u, t), 1)
    if problem.mayer is not None:
        check("mayer", lambda: problem.mayer(y0, t, yf, tf), 1)
    if problem.n_c:
        check("path", lambda: problem.path(y, u, t), problem.n_c)
        if np.any(problem.c_min > problem.c_max):
            findings.append("path bounds: min exceeds max")
    if np.any(problem.control_lower > problem.control_upper):
        findings.append("control bounds: min exceeds max")
    if np.any(problem.b_min > problem.b_max):
        findings.append("boundary bounds: min exceeds max")
    return findings


def as_single_domain(problem: BolzaProblem) -> MultiDomainProblem:
    """Wrap a problem as the trivial Q = 1 multi-domain problem."""
    return MultiDomainProblem(base=problem, switch_params=(), fixed_controls=({},))
