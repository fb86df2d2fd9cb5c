"""Bang-bang structure detection and the mesh-iteration driver.

The driver solves the problem on a coarse single-domain mesh, estimates
the discretization error, and, when the error test fails on the first
mesh, probes the Hamiltonian with hyper-dual seeds to find control
components it depends on linearly.  Sign changes of the switching
functions (the control gradient of the Hamiltonian, built from the
collocated state and costate) locate control discontinuities; the
problem is then reformulated over multiple domains with the switch
times as bracketed optimization variables and each control-linear
component pinned to the limit dictated by the switching-function sign.
Meshes that still fail the error test afterwards fall back to a
standard hp refinement (raise the interval order when the state's
Legendre coefficients decay fast, split the interval otherwise).
"""

from __future__ import annotations

import bisect
import dataclasses
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import ipm
from .hyperdual import HyperDual, parts
from .lgr import (
    MAX_INTERVAL_POINTS,
    MIN_INTERVAL_POINTS,
    MeshLayout,
    affine_to_time,
    barycentric_interpolate,
    diff_matrix,
    lgr_rule,
)
from .ocp import BolzaProblem, CollocatedSolution, MultiDomainProblem, SwitchParam, as_single_domain
from .transcribe import Transcription, hamiltonian

__all__ = [
    "StructureDetectionError",
    "SolveFailure",
    "LinearityReport",
    "SwitchingProfile",
    "DiscontinuityEstimate",
    "RefineConfig",
    "MeshIterationRecord",
    "DriveResult",
    "detect_linearity",
    "switching_functions",
    "estimate_discontinuities",
    "build_multidomain",
    "error_estimate",
    "decay_rates",
    "standard_refine",
    "drive",
]


class StructureDetectionError(RuntimeError):
    """Bang-bang structure could not be trusted; fall back to standard."""


class SolveFailure(RuntimeError):
    """An NLP solve failed during the mesh iteration."""

    def __init__(self, mesh_iteration: int, result, history):
        self.mesh_iteration = mesh_iteration
        self.result = result
        self.history = history
        super().__init__(
            f"NLP solve failed on mesh iteration {mesh_iteration}: {result.status}"
        )


@dataclass(frozen=True)
class LinearityReport:
    """Which control components the Hamiltonian is linear in."""

    linear_indices: tuple[int, ...]
    nonlinear_indices: tuple[int, ...]
    evidence: dict

    @property
    def count(self) -> int:
        return len(self.linear_indices)


@dataclass
class SwitchingProfile:
    """Switching-function samples at every collocation point."""

    components: tuple[int, ...]
    times: list[np.ndarray]
    values: list[np.ndarray]  # per domain: (points, len(components))
    t0: float
    tf: float

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        return np.concatenate(self.times), np.vstack(self.values)


@dataclass
class DiscontinuityEstimate:
    """One estimated control switch, with its bracketing bounds."""

    component: int
    time: float
    source: str  # "interior" or "interval-boundary"
    sign_before: float
    sign_after: float
    lower: float = np.nan
    upper: float = np.nan


def _collocation_data(solution: CollocatedSolution, problem: BolzaProblem):
    y = np.vstack([d.states[:-1] for d in solution.domains])
    lam = np.vstack([d.costates[:-1] for d in solution.domains])
    u = np.vstack([d.controls for d in solution.domains])
    t = np.concatenate([d.times[:-1] for d in solution.domains])
    return y, lam, u, t


def detect_linearity(
    solution: CollocatedSolution,
    problem: BolzaProblem,
    *,
    spread_tol: float = 1e-8,
    curvature_tol: float = 1e-10,
) -> LinearityReport:
    """Classify each control component by probing the Hamiltonian.

    At every collocation point, for control samples spanning the
    component's bounds, the first and second control derivatives of the
    Hamiltonian are computed with hyper-dual seeds while everything
    else stays fixed.  A component is linear iff the first derivative
    is constant across samples, the own second derivative vanishes, and
    every cross partial with other controls vanishes.
    """
    y, lam, u, t = _collocation_data(solution, problem)
    npts = t.size
    n_u = problem.n_u
    ylist = [y[:, m] for m in range(problem.n_y)]
    lamlist = [lam[:, m] for m in range(problem.n_y)]
    linear, nonlinear = [], []
    evidence: dict = {}
    for i in range(n_u):
        lo, hi = problem.control_lower[i], problem.control_upper[i]
        if not (np.isfinite(lo) and np.isfinite(hi)):
            warnings.warn(
                f"control component {i} has an unbounded box; "
                "skipping linearity sampling and marking it nonlinear"
            )
            nonlinear.append(i)
            evidence[i] = np.inf
            continue
        samples = (lo, 0.5 * (lo + hi), hi)
        firsts = []
        curved = False
        for sval in samples:
            for j in range(n_u):
                ulist = [u[:, k].copy() for k in range(n_u)]
                base_i = np.full(npts, sval)
                if j == i:
                    ulist[i] = HyperDual(base_i, 1.0, 1.0, 0.0)
                else:
                    ulist[i] = HyperDual(base_i, 1.0, 0.0, 0.0)
                    ulist[j] = HyperDual(ulist[j], 0.0, 1.0, 0.0)
                h = hamiltonian(problem, ylist, lamlist, ulist, t)
                hval, d1, _, d12 = parts(h, like=(npts,))
                scale = 1.0 + np.abs(hval)
                if np.any(np.abs(d12) > curvature_tol * scale):
                    curved = True
                if j == i:
                    firsts.append(np.asarray(d1, dtype=float))
        firsts = np.stack(firsts)  # (samples, points)
        spread = firsts.max(axis=0) - firsts.min(axis=0)
        evidence[i] = float(spread.max())
        flat = np.all(spread <= spread_tol * (1.0 + np.abs(firsts).max(axis=0)))
        if flat and not curved:
            linear.append(i)
        else:
            nonlinear.append(i)
    return LinearityReport(
        linear_indices=tuple(linear),
        nonlinear_indices=tuple(nonlinear),
        evidence=evidence,
    )


def switching_functions(
    solution: CollocatedSolution, problem: BolzaProblem, report: LinearityReport
) -> SwitchingProfile:
    """Control gradient of the Hamiltonian along the collocated solution."""
    if not report.linear_indices:
        raise ValueError("no control-linear components to build switching functions for")
    comps = report.linear_indices
    times, values = [], []
    for dom in solution.domains:
        npts = dom.n_collocation
        ylist = [dom.states[:-1, m] for m in range(problem.n_y)]
        lamlist = [dom.costates[:-1, m] for m in range(problem.n_y)]
        tvec = dom.times[:-1]
        sig = np.empty((npts, len(comps)))
        for c, i in enumerate(comps):
            ulist = [dom.controls[:, k] for k in range(problem.n_u)]
            ulist[i] = HyperDual(ulist[i], 1.0, 0.0, 0.0)
            h = hamiltonian(problem, ylist, lamlist, ulist, tvec)
            sig[:, c] = parts(h, like=(npts,))[1]
        times.append(np.asarray(tvec, dtype=float))
        values.append(sig)
    return SwitchingProfile(
        components=comps, times=times, values=values, t0=solution.t0, tf=solution.tf
    )


def estimate_discontinuities(
    profile: SwitchingProfile, solution: CollocatedSolution
) -> list[DiscontinuityEstimate]:
    """Locate switch-time estimates from switching-function sign changes.

    Inside a mesh interval the estimate is the average of the midpoint
    of the sign-change pair and the midpoint of the pair with the
    largest control jump in that interval; a sign change across two
    mesh intervals estimates the switch at the shared mesh point.

    A solved mesh legitimately carries isolated zeros of a switching
    function: wherever the NLP placed an interior control value to
    straddle a jump, control stationarity drives sigma to zero at
    exactly that point.  Such a zero flanked by opposite signs is a
    sign change located at the point itself.  Zeros over consecutive
    points (an arc) or zeros the sign does not cross indicate singular
    or degenerate structure and abort bang-bang refinement.
    """
    estimates: list[DiscontinuityEstimate] = []
    horizon = profile.tf - profile.t0
    for d, dom in enumerate(solution.domains):
        sig = profile.values[d]
        tvec = profile.times[d]
        npts = tvec.size
        ztol = 1e-8 * (1.0 + np.abs(sig).max(axis=0))
        offsets = np.concatenate([[0], np.cumsum(dom.mesh.points)])
        interval_of = np.repeat(np.arange(dom.mesh.n_intervals), dom.mesh.points)
        first_of_interval = np.zeros(npts, dtype=bool)
        first_of_interval[offsets[:-1]] = True
        for c, i in enumerate(profile.components):
            zero = np.abs(sig[:, c]) < ztol[c]
            s = np.where(zero, 0.0, np.sign(sig[:, c]))
            if zero[0] or zero[-1]:
                raise StructureDetectionError(
                    f"switching function of control {i} vanishes at the horizon "
                    "edge; cannot bracket a switch there"
                )
            # group zeros into runs; a short run flanked by opposite signs
            # is one crossing (the jump straddles those points), anything
            # longer (or sign-preserving) looks singular/degenerate
            runs: list[tuple[int, int]] = []
            p = 0
            while p < npts:
                if zero[p]:
                    q = p
                    while q + 1 < npts and zero[q + 1]:
                        q += 1
                    runs.append((p, q))
                    p = q + 1
                else:
                    p += 1
            for p0, p1 in runs:
                if p1 - p0 + 1 > 2:
                    raise StructureDetectionError(
                        f"switching function of control {i} vanishes on "
                        f"{p1 - p0 + 1} consecutive collocation points; "
                        "possible singular arc"
                    )
                if s[p0 - 1] * s[p1 + 1] >= 0:
                    raise StructureDetectionError(
                        f"switching function of control {i} grazes zero without "
                        f"changing sign near t={tvec[p0]:.6g}"
                    )
            uvals = dom.controls[:, i]

            def interval_tu(k: int) -> float:
                a, b = offsets[k], offsets[k + 1]
                if b - a >= 2:
                    du = np.abs(np.diff(uvals[a:b]))
                    jmax = int(np.argmax(du))
                    return 0.5 * (tvec[a + jmax] + tvec[a + jmax + 1])
                return float(tvec[a])

            # crossings between adjacent nonzero-signed points
            for p in range(npts - 1):
                if s[p] * s[p + 1] < 0:
                    same_interval = interval_of[p] == interval_of[p + 1]
                    if same_interval:
                        t_sig = 0.5 * (tvec[p] + tvec[p + 1])
                        t_d = 0.5 * (t_sig + interval_tu(interval_of[p]))
                        src = "interior"
                    else:
                        t_d = float(tvec[p + 1])
                        src = "interval-boundary"
                    estimates.append(
                        DiscontinuityEstimate(
                            component=i,
                            time=t_d,
                            source=src,
                            sign_before=s[p],
                            sign_after=s[p + 1],
                        )
                    )
            # crossings located at a zero run
            for p0, p1 in runs:
                boundary_pts = [p for p in range(p0, p1 + 1) if first_of_interval[p]]
                if boundary_pts:
                    t_d = float(tvec[boundary_pts[0]])
                    src = "interval-boundary"
                else:
                    t_sig = 0.5 * (tvec[p0] + tvec[p1])
                    t_d = 0.5 * (t_sig + interval_tu(interval_of[p0]))
                    src = "interior"
                estimates.append(
                    DiscontinuityEstimate(
                        component=i,
                        time=t_d,
                        source=src,
                        sign_before=s[p0 - 1],
                        sign_after=s[p1 + 1],
                    )
                )
    estimates.sort(key=lambda est: est.time)
    if not estimates:
        return []
    times = [est.time for est in estimates]
    for k in range(len(times) - 1):
        if times[k + 1] - times[k] < 1e-9 * horizon:
            raise StructureDetectionError(
                "coincident discontinuity estimates; cannot bracket switch times"
            )
    edges = [profile.t0] + times + [profile.tf]
    for k, est in enumerate(estimates):
        est.lower = 0.5 * (edges[k] + est.time)
        est.upper = 0.5 * (est.time + edges[k + 2])
    return estimates


def build_multidomain(
    problem: BolzaProblem,
    estimates: list[DiscontinuityEstimate],
    profile: SwitchingProfile,
) -> MultiDomainProblem:
    """Partition the horizon at the estimates and pin bang components.

    Within each domain, each control-linear component is fixed to its
    lower limit where its switching function is positive and to its
    upper limit where it is negative; components the Hamiltonian
    depends on nonlinearly stay free.
    """
    if not estimates:
        raise ValueError("no discontinuity estimates to build domains from")
    times = [est.time for est in estimates]
    if any(times[k + 1] <= times[k] for k in range(len(times) - 1)):
        raise ValueError("estimates must be sorted and strictly increasing")
    t0, tf = profile.t0, profile.tf
    q = len(estimates) + 1
    all_t, all_sig = profile.stacked()
    fixed: list[dict] = [dict() for _ in range(q)]
    domain_edges = [t0] + times + [tf]
    for c, i in enumerate(profile.components):
        own = [est for est in estimates if est.component == i]
        own_times = [est.time for est in own]
        # the recorded before/after signs must chain into alternating spans
        for k in range(len(own) - 1):
            if own[k].sign_after != own[k + 1].sign_before:
                raise StructureDetectionError(
                    f"inconsistent switching-function signs for control {i}"
                )
        span_signs = [est.sign_before for est in own]
        span_signs.append(own[-1].sign_after if own else _central_sign(all_t, all_sig[:, c], t0, tf))
        # verify against the samples on the central half of each span
        span_edges = [t0] + own_times + [tf]
        for k in range(len(span_signs)):
            a, b = span_edges[k], span_edges[k + 1]
            w = b - a
            mask = (all_t >= a + 0.25 * w) & (all_t <= b - 0.25 * w)
            if mask.any():
                agree = np.sign(all_sig[mask, c]) == span_signs[k]
                if np.count_nonzero(agree) < 0.5 * mask.sum():
                    raise StructureDetectionError(
                        f"switching-function sign conflict for control {i} in "
                        f"[{a:.6g}, {b:.6g}]; possible missed switch"
                    )
        for d in range(q):
            mid = 0.5 * (domain_edges[d] + domain_edges[d + 1])
            span = bisect.bisect_right(own_times, mid)
            sgn = span_signs[span]
            fixed[d][i] = float(
                problem.control_lower[i] if sgn > 0 else problem.control_upper[i]
            )
    switch_params = tuple(
        SwitchParam(guess=est.time, lower=est.lower, upper=est.upper) for est in estimates
    )
    # when the endpoints are free their boxes must keep the edge ordering
    base = problem
    if problem.tf_bounds[1] > problem.tf_bounds[0]:
        lo = max(problem.tf_bounds[0], switch_params[-1].upper)
        if lo >= problem.tf_bounds[1]:
            raise StructureDetectionError("no room for a free final time above the last switch")
        base = dataclasses.replace(base, tf_bounds=(lo, problem.tf_bounds[1]))
    if problem.t0_bounds[1] > problem.t0_bounds[0]:
        hi = min(problem.t0_bounds[1], switch_params[0].lower)
        if hi <= problem.t0_bounds[0]:
            raise StructureDetectionError("no room for a free start time below the first switch")
        base = dataclasses.replace(base, t0_bounds=(problem.t0_bounds[0], hi))
    return MultiDomainProblem(
        base=base, switch_params=switch_params, fixed_controls=tuple(fixed)
    )


def _central_sign(all_t, sig_col, a, b):
    mid = 0.5 * (a + b)
    p = int(np.argmin(np.abs(all_t - mid)))
    return np.sign(sig_col[p])


# -- error estimation and standard refinement ---------------------------------


def error_estimate(solution: CollocatedSolution, problem: BolzaProblem) -> list[np.ndarray]:
    """Relative discretization error per mesh interval, per domain.

    The state and control are interpolated to a rule with one more
    point per interval; the state is re-propagated from the interval
    start by quadrature integration of the dynamics on the interpolated
    trajectory; the error is the largest normalized discrepancy, the
    normalization being 1 + max |Y| of each component over the whole
    trajectory.
    """
    norm = 1.0 + np.max(
        np.vstack([np.abs(d.states) for d in solution.domains]), axis=0
    )
    edges = (solution.t0,) + solution.switch_times + (solution.tf,)
    out = []
    for d, dom in enumerate(solution.domains):
        delta = edges[d + 1] - edges[d]
        mesh = dom.mesh
        offsets = np.concatenate([[0], np.cumsum(mesh.points)])
        errs = np.empty(mesh.n_intervals)
        for k in range(mesh.n_intervals):
            nk = mesh.points[k]
            a, b = offsets[k], offsets[k + 1]
            rule = lgr_rule(nk)
            fine = lgr_rule(nk + 1)
            dstar = diff_matrix(fine)
            integ = np.linalg.inv(dstar.entries[:, 1:])
            svals = dom.states[a : b + 1]
            uvals = dom.controls[a:b]
            ta, tb = mesh.interval(k)
            h = tb - ta
            # interpolants in the interval's reference coordinate
            ysamp = barycentric_interpolate(
                rule.support_points, rule.support_bary, svals, fine.nodes
            )
            usamp = barycentric_interpolate(rule.nodes, rule.node_bary, uvals, fine.nodes)
            tau_dom = affine_to_time(fine.nodes, ta, tb)
            tsamp = edges[d] + 0.5 * delta * (tau_dom + 1.0)
            ylist = [ysamp[:, m] for m in range(problem.n_y)]
            ulist = [usamp[:, i] for i in range(problem.n_u)]
            avals = problem.dynamics(ylist, ulist, tsamp)
            g = np.stack(
                [parts(v, like=(nk + 1,))[0] for v in avals], axis=1
            )
            scale = 0.25 * h * delta
            prop = svals[0][None, :] + scale * (integ @ g)
            ycheck = barycentric_interpolate(
                rule.support_points, rule.support_bary, svals, fine.support_points[1:]
            )
            errs[k] = np.max(np.abs(prop - ycheck) / norm[None, :])
        out.append(errs)
    return out


def decay_rates(solution: CollocatedSolution) -> list[np.ndarray]:
    """Fitted log10 Legendre-coefficient slope per interval (per domain).

    Steeply negative slopes mean the state interpolant's spectral
    coefficients die fast (smooth content); shallow slopes indicate
    under-resolved or nonsmooth content.
    """
    out = []
    for dom in solution.domains:
        mesh = dom.mesh
        offsets = np.concatenate([[0], np.cumsum(mesh.points)])
        slopes = np.empty(mesh.n_intervals)
        for k in range(mesh.n_intervals):
            nk = mesh.points[k]
            a = offsets[k]
            rule = lgr_rule(nk)
            pts = rule.support_points
            vander = np.polynomial.legendre.legvander(pts, nk)
            coef = np.linalg.solve(vander, dom.states[a : a + nk + 1])
            mag = np.max(np.abs(coef), axis=1)
            mag = mag / max(mag.max(), 1e-300)
            lm = np.log10(mag + 1e-16)
            deg = np.arange(nk + 1)
            slopes[k] = np.polyfit(deg, lm, 1)[0]
        out.append(slopes)
    return out


def standard_refine(
    mesh: MeshLayout,
    errors: np.ndarray,
    decay: np.ndarray,
    tol: float,
    *,
    smooth_slope: float = -0.5,
) -> MeshLayout:
    """hp fallback: raise the order where smooth, split where not."""
    bounds = [mesh.boundaries[0]]
    points: list[int] = []
    for k in range(mesh.n_intervals):
        ta, tb = mesh.interval(k)
        nk = mesh.points[k]
        if errors[k] <= tol:
            points.append(nk)
            bounds.append(tb)
            continue
        smooth = decay[k] <= smooth_slope
        if smooth and nk < MAX_INTERVAL_POINTS:
            bump = max(1, int(np.ceil(np.log10(errors[k] / tol))))
            points.append(min(MAX_INTERVAL_POINTS, nk + bump))
            bounds.append(tb)
        else:
            nsub = int(np.clip(np.ceil((errors[k] / tol) ** (1.0 / (nk + 1))), 2, 8))
            cuts = np.linspace(ta, tb, nsub + 1)[1:]
            points.extend([MIN_INTERVAL_POINTS] * nsub)
            bounds.extend(cuts.tolist())
    return MeshLayout(np.asarray(bounds), tuple(points))


# -- the mesh-iteration driver ----------------------------------------------


@dataclass
class RefineConfig:
    initial_intervals: int = 10
    initial_points: int = 5
    sub_intervals: int = 2
    sub_points: int = 5
    tol: float = 1e-6
    max_mesh_iterations: int = 10
    detect: bool = True
    nlp_options: ipm.SolverOptions = field(default_factory=ipm.SolverOptions)
    log: Optional[Callable[[str], None]] = None


@dataclass
class MeshIterationRecord:
    index: int
    n_collocation: int
    n_domains: int
    objective: float
    error: float
    nlp_status: str
    nlp_iterations: int
    wall_time: float


@dataclass
class DriveResult:
    solution: CollocatedSolution
    history: list[MeshIterationRecord]
    mesh_iterations: int
    final_points: int
    converged: bool
    linear_indices: tuple[int, ...]
    estimates: list[DiscontinuityEstimate]
    profile: Optional[SwitchingProfile]
    mdp: MultiDomainProblem
    meshes: list[MeshLayout]

    @property
    def objective(self) -> float:
        return self.solution.objective


def drive(problem: BolzaProblem, config: Optional[RefineConfig] = None) -> DriveResult:
    """Run the full mesh-iteration loop.

    Solve on the current mesh, estimate the error, and stop when the
    error passes or the iteration budget is exhausted.  Structure
    detection runs only on the first mesh; when it finds control-linear
    components with sign changes, the next mesh solves the multi-domain
    problem with variable switch times, otherwise (and on all later
    meshes) the standard hp refinement runs.
    """
    cfg = config or RefineConfig()
    log = cfg.log or (lambda s: None)
    mdp = as_single_domain(problem)
    meshes = [MeshLayout.uniform(cfg.initial_intervals, cfg.initial_points)]
    source: Optional[CollocatedSolution] = None
    history: list[MeshIterationRecord] = []
    linear: tuple[int, ...] = ()
    estimates: list[DiscontinuityEstimate] = []
    profile: Optional[SwitchingProfile] = None
    m = 1
    while True:
        t_start = time.perf_counter()
        tr = Transcription(mdp, meshes)
        x0 = tr.initial_point(source)
        result = ipm.solve(tr, cfg.nlp_options, x0)
        if result.status != "converged":
            raise SolveFailure(m, result, history)
        sol = tr.extract(result)
        errs = error_estimate(sol, problem)
        emax = float(max(e.max() for e in errs))
        wall = time.perf_counter() - t_start
        history.append(
            MeshIterationRecord(
                index=m,
                n_collocation=sol.total_collocation,
                n_domains=sol.n_domains,
                objective=sol.objective,
                error=emax,
                nlp_status=result.status,
                nlp_iterations=result.iterations,
                wall_time=wall,
            )
        )
        log(
            f"mesh {m}: domains={sol.n_domains} points={sol.total_collocation} "
            f"objective={sol.objective:.10g} error={emax:.3e}"
        )
        done = emax < cfg.tol
        if done or m > cfg.max_mesh_iterations:
            return DriveResult(
                solution=sol,
                history=history,
                mesh_iterations=m,
                final_points=sol.total_collocation,
                converged=done,
                linear_indices=linear,
                estimates=estimates,
                profile=profile,
                mdp=mdp,
                meshes=meshes,
            )
        refined = False
        if m == 1 and cfg.detect:
            report = detect_linearity(sol, problem)
            linear = report.linear_indices
            log(f"linearity: I={list(linear)} evidence={report.evidence}")
            if report.count:
                try:
                    profile = switching_functions(sol, problem, report)
                    estimates = estimate_discontinuities(profile, sol)
                    if estimates:
                        mdp = build_multidomain(problem, estimates, profile)
                        meshes = [
                            MeshLayout.uniform(cfg.sub_intervals, cfg.sub_points)
                            for _ in range(mdp.n_domains)
                        ]
                        log(
                            f"bang-bang reformulation: {len(estimates)} switches, "
                            f"{mdp.n_domains} domains"
                        )
                        refined = True
                    else:
                        log("no switching-function sign changes; standard refinement")
                except StructureDetectionError as exc:
                    log(f"bang-bang refinement aborted ({exc}); standard refinement")
                    estimates = []
                    profile = None
        if not refined:
            decay = decay_rates(sol)
            meshes = [
                standard_refine(meshes[d], errs[d], decay[d], cfg.tol)
                for d in range(len(meshes))
            ]
        source = sol
        m += 1
