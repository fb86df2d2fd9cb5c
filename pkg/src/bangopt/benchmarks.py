"""The three benchmark problems and the reporting harness.

Problems:
  * three-compartment: compartment populations N1..N3 driven by two
    bounded agents; endpoint-weighted cost plus integrated first agent.
  * robot-arm: minimum-time slew of a rigid arm (length coordinate,
    two angles) with unit torque bounds.
  * free-flying-robot: planar rigid body steered by two opposed
    thruster pairs; minimum total thrust over a fixed horizon.

Each run produces a :class:`RunReport` with the mesh-iteration history,
the final trajectory (states, controls, costates, switching functions)
sampled at the discretization points, and the solved switch times.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import hyperdual as hd
from . import ipm
from .hyperdual import HyperDual, parts
from .ocp import BolzaProblem, Guess
from .refine import (
    DriveResult,
    LinearityReport,
    MeshIterationRecord,
    RefineConfig,
    drive,
    switching_functions,
)
from .transcribe import hamiltonian

__all__ = [
    "BenchmarkSpec",
    "RunReport",
    "benchmark_problem",
    "run",
    "report_table",
    "export_trajectory",
    "write_metadata",
    "BENCHMARK_NAMES",
]

BENCHMARK_NAMES = ("three-compartment", "robot-arm", "free-flying-robot")


def three_compartment() -> BolzaProblem:
    a1, a2, a3 = 0.197, 0.395, 0.107
    r1, r2, r3 = 1.0, 0.5, 1.0
    horizon = 7.0
    u2_min = 0.70

    def dynamics(y, u, t):
        n1, n2, n3 = y
        u1, u2 = u
        # N3 drains by division (each leaving cell re-enters N1 twice)
        return [
            -a1 * n1 + 2.0 * a3 * n3 * (1.0 - u1),
            -a2 * n2 * u2 + a1 * n1,
            -a3 * n3 + a2 * n2 * u2,
        ]

    def lagrangian(y, u, t):
        return u[0]

    def mayer(y0, t0, yf, tf):
        return r1 * yf[0] + r2 * yf[1] + r3 * yf[2]

    def boundary(y0, t0, yf, tf):
        return [y0[0], y0[1], y0[2]]

    start = np.array([38.0, 2.5, 3.25])
    return BolzaProblem(
        n_y=3,
        n_u=2,
        dynamics=dynamics,
        lagrangian=lagrangian,
        mayer=mayer,
        boundary=boundary,
        b_min=start,
        b_max=start,
        control_lower=np.array([0.0, u2_min]),
        control_upper=np.array([1.0, 1.0]),
        t0_bounds=(0.0, 0.0),
        tf_bounds=(horizon, horizon),
        guess=Guess(t0=0.0, tf=horizon, states=np.vstack([start, start])),
        name="three-compartment",
    )


def robot_arm() -> BolzaProblem:
    arm_length = 5.0

    def inertia(y1, y5=None):
        core = ((arm_length - y1) ** 3 + y1**3) / 3.0
        return core

    def dynamics(y, u, t):
        y1, y2, y3, y4, y5, y6 = y
        u1, u2, u3 = u
        core = ((arm_length - y1) ** 3 + y1**3) / 3.0
        i_theta = core * hd.sin(y5) ** 2
        i_phi = core
        return [y2, u1 / arm_length, y4, u2 / i_theta, y6, u3 / i_phi]

    def mayer(y0, t0, yf, tf):
        return tf

    start = np.array([4.5, 0.0, 0.0, 0.0, np.pi / 4.0, 0.0])
    final = np.array([4.5, 0.0, 2.0 * np.pi / 3.0, 0.0, np.pi / 4.0, 0.0])

    def boundary(y0, t0, yf, tf):
        return list(y0) + list(yf)

    return BolzaProblem(
        n_y=6,
        n_u=3,
        dynamics=dynamics,
        mayer=mayer,
        boundary=boundary,
        b_min=np.concatenate([start, final]),
        b_max=np.concatenate([start, final]),
        control_lower=-np.ones(3),
        control_upper=np.ones(3),
        t0_bounds=(0.0, 0.0),
        tf_bounds=(1.0, 50.0),
        guess=Guess(
            t0=0.0, tf=10.0, states=np.vstack([start, final]), controls=np.zeros((2, 3))
        ),
        name="robot-arm",
    )


def free_flying_robot() -> BolzaProblem:
    alpha = 0.2
    beta = 0.2
    horizon = 12.0

    def dynamics(y, u, t):
        _, _, vx, vy, th, om = y
        u1, u2, u3, u4 = u
        f1 = u1 - u2
        f2 = u3 - u4
        thrust = f1 + f2
        return [
            vx,
            vy,
            thrust * hd.cos(th),
            thrust * hd.sin(th),
            om,
            alpha * f1 - beta * f2,
        ]

    def lagrangian(y, u, t):
        return u[0] + u[1] + u[2] + u[3]

    def path(y, u, t):
        return [u[0] - u[1], u[2] - u[3]]

    start = np.array([-10.0, -10.0, 0.0, 0.0, np.pi / 2.0, 0.0])
    final = np.zeros(6)

    def boundary(y0, t0, yf, tf):
        return list(y0) + list(yf)

    return BolzaProblem(
        n_y=6,
        n_u=4,
        dynamics=dynamics,
        lagrangian=lagrangian,
        boundary=boundary,
        b_min=np.concatenate([start, final]),
        b_max=np.concatenate([start, final]),
        control_lower=np.zeros(4),
        control_upper=np.ones(4),
        n_c=2,
        path=path,
        c_min=np.array([-np.inf, -np.inf]),
        c_max=np.array([1.0, 1.0]),
        t0_bounds=(0.0, 0.0),
        tf_bounds=(horizon, horizon),
        guess=Guess(t0=0.0, tf=horizon, states=np.vstack([start, final])),
        name="free-flying-robot",
    )


_BUILDERS = {
    "three-compartment": three_compartment,
    "robot-arm": robot_arm,
    "free-flying-robot": free_flying_robot,
}

_STATE_NAMES = {
    "three-compartment": ("N1", "N2", "N3"),
    "robot-arm": ("y1", "y2", "y3", "y4", "y5", "y6"),
    "free-flying-robot": ("x", "y", "vx", "vy", "theta", "omega"),
}

_CONTROL_NAMES = {
    "three-compartment": ("u1", "u2"),
    "robot-arm": ("u1", "u2", "u3"),
    "free-flying-robot": ("u1", "u2", "u3", "u4"),
}

# derived difference columns: name -> (positive index, negative index)
_DERIVED = {
    "free-flying-robot": (("F1", 0, 1), ("F2", 2, 3)),
}

_DEFAULT_SUB_POINTS = {
    "three-compartment": 5,
    "robot-arm": 5,
    "free-flying-robot": 6,
}

_CONSTANTS = {
    "three-compartment": {
        "a1": 0.197, "a2": 0.395, "a3": 0.107,
        "r1": 1.0, "r2": 0.5, "r3": 1.0,
        "T": 7.0, "u2_min": 0.70,
    },
    "robot-arm": {"L": 5.0},
    "free-flying-robot": {"alpha": 0.2, "beta": 0.2, "T": 12.0},
}


def benchmark_problem(name: str) -> BolzaProblem:
    if name not in _BUILDERS:
        raise ValueError(f"unknown benchmark {name!r}; expected one of {BENCHMARK_NAMES}")
    return _BUILDERS[name]()


@dataclass
class BenchmarkSpec:
    """One benchmark run request."""

    name: str
    method: str = "bb"  # "bb" or "standard"
    mesh_tol: float = 1e-6
    max_mesh_iterations: int = 10
    initial_intervals: int = 10
    initial_points: int = 5
    sub_intervals: int = 2
    sub_points: Optional[int] = None  # per-problem default when None
    nlp_tolerance: float = 1e-9
    nlp_max_iterations: int = 500
    log: Optional[callable] = None

    def __post_init__(self):
        if self.name not in _BUILDERS:
            raise ValueError(f"unknown benchmark {self.name!r}; expected one of {BENCHMARK_NAMES}")
        if self.method not in ("bb", "standard"):
            raise ValueError("method must be 'bb' or 'standard'")
        if self.sub_points is None:
            self.sub_points = _DEFAULT_SUB_POINTS[self.name]

    @property
    def constants(self) -> dict:
        return dict(_CONSTANTS[self.name])

    def refine_config(self) -> RefineConfig:
        return RefineConfig(
            initial_intervals=self.initial_intervals,
            initial_points=self.initial_points,
            sub_intervals=self.sub_intervals,
            sub_points=self.sub_points,
            tol=self.mesh_tol,
            max_mesh_iterations=self.max_mesh_iterations,
            detect=(self.method == "bb"),
            nlp_options=ipm.SolverOptions(
                tolerance=self.nlp_tolerance, max_iterations=self.nlp_max_iterations
            ),
            log=self.log,
        )


@dataclass
class RunReport:
    """Result of one benchmark run."""

    name: str
    method: str
    mesh_iterations: int
    final_points: int
    objective: float
    wall_time: float
    converged: bool
    linear_indices: tuple[int, ...]
    switch_times: list[dict]
    history: list[MeshIterationRecord]
    trajectory: dict
    state_names: tuple[str, ...]
    control_names: tuple[str, ...]
    derived: tuple = ()

    @property
    def label(self) -> str:
        return f"{self.name}/{self.method}"


def _sigma_at_rows(problem, y, lam, u, t, comps):
    """Switching-function values at arbitrary trajectory rows."""
    npts = t.size
    sig = np.empty((npts, len(comps)))
    ylist = [y[:, m] for m in range(problem.n_y)]
    lamlist = [lam[:, m] for m in range(problem.n_y)]
    for c, i in enumerate(comps):
        ulist = [u[:, k] for k in range(problem.n_u)]
        ulist[i] = HyperDual(ulist[i], 1.0, 0.0, 0.0)
        h = hamiltonian(problem, ylist, lamlist, ulist, t)
        sig[:, c] = parts(h, like=(npts,))[1]
    return sig


def _trajectory_arrays(problem, result: DriveResult) -> dict:
    sol = result.solution
    rows_t, rows_y, rows_u, rows_lam = [], [], [], []
    for dom in sol.domains:
        rows_t.append(dom.times)
        rows_y.append(dom.states)
        rows_lam.append(dom.costates)
        # the non-collocated endpoint repeats the last collocated control
        rows_u.append(np.vstack([dom.controls, dom.controls[-1]]))
    t = np.concatenate(rows_t)
    y = np.vstack(rows_y)
    u = np.vstack(rows_u)
    lam = np.vstack(rows_lam)
    comps = result.linear_indices
    sig = _sigma_at_rows(problem, y, lam, u, t, comps) if comps else np.empty((t.size, 0))
    return {"t": t, "Y": y, "U": u, "LAM": lam, "SIG": sig, "components": comps}


def run(spec: BenchmarkSpec) -> RunReport:
    """Execute one benchmark with the requested method and config."""
    problem = benchmark_problem(spec.name)
    start = time.perf_counter()
    result = drive(problem, spec.refine_config())
    wall = time.perf_counter() - start
    sol = result.solution
    switches = []
    for k, t_s in enumerate(sol.switch_times):
        est = result.estimates[k] if k < len(result.estimates) else None
        switches.append(
            {
                "time": float(t_s),
                "component": None if est is None else est.component,
                "sign_before": None if est is None else est.sign_before,
                "sign_after": None if est is None else est.sign_after,
            }
        )
    return RunReport(
        name=spec.name,
        method=spec.method,
        mesh_iterations=result.mesh_iterations,
        final_points=result.final_points,
        objective=sol.objective,
        wall_time=wall,
        converged=result.converged,
        linear_indices=result.linear_indices,
        switch_times=switches,
        history=result.history,
        trajectory=_trajectory_arrays(problem, result),
        state_names=_STATE_NAMES[spec.name],
        control_names=_CONTROL_NAMES[spec.name],
        derived=_DERIVED.get(spec.name, ()),
    )


def report_table(reports: list[RunReport]) -> str:
    """Plain-text table: rows M, N_f, T(s); one column per run."""
    if not reports:
        raise ValueError("need at least one report")
    labels = [r.label for r in reports]
    rows = [
        ("M", [str(r.mesh_iterations) for r in reports]),
        ("N_f", [str(r.final_points) for r in reports]),
        ("T (s)", [f"{r.wall_time:.4f}" for r in reports]),
    ]
    width0 = max(len(name) for name, _ in rows)
    widths = [max(len(lbl), max(len(row[1][i]) for row in rows)) for i, lbl in enumerate(labels)]
    lines = [
        " " * width0 + "  " + "  ".join(lbl.rjust(w) for lbl, w in zip(labels, widths))
    ]
    for name, cells in rows:
        lines.append(
            name.ljust(width0) + "  " + "  ".join(c.rjust(w) for c, w in zip(cells, widths))
        )
    return "\n".join(lines) + "\n"


def export_trajectory(report: RunReport, path) -> None:
    """Write the sampled trajectory as CSV with a header row."""
    traj = report.trajectory
    comps = traj.get("components", ())
    header = (
        ["t"]
        + list(report.state_names)
        + list(report.control_names)
        + [f"lambda{m + 1}" for m in range(len(report.state_names))]
        + [f"sigma{i + 1}" for i in range(len(comps))]
        + [name for name, _, _ in report.derived]
    )
    t = traj.get("t")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        if t is None or t.size == 0:
            return
        for r in range(t.size):
            row = [f"{t[r]:.12g}"]
            row += [f"{v:.12g}" for v in traj["Y"][r]]
            row += [f"{v:.12g}" for v in traj["U"][r]]
            row += [f"{v:.12g}" for v in traj["LAM"][r]]
            row += [f"{v:.12g}" for v in traj["SIG"][r]]
            for _, ip, im in report.derived:
                row.append(f"{traj['U'][r, ip] - traj['U'][r, im]:.12g}")
            writer.writerow(row)


def write_metadata(report: RunReport, path) -> None:
    """Key-value run summary (one `key = value` per line)."""
    with open(path, "w") as fh:
        fh.write(f"problem = {report.name}\n")
        fh.write(f"method = {report.method}\n")
        fh.write(f"converged = {report.converged}\n")
        fh.write(f"mesh_iterations = {report.mesh_iterations}\n")
        fh.write(f"final_collocation_points = {report.final_points}\n")
        fh.write(f"objective = {report.objective:.12g}\n")
        fh.write(f"wall_time_s = {report.wall_time:.4f}\n")
        fh.write(f"control_linear_components = {list(report.linear_indices)}\n")
        for k, sw in enumerate(report.switch_times):
            fh.write(
                f"switch_{k} = time={sw['time']:.12g} component={sw['component']} "
                f"sign_before={sw['sign_before']} sign_after={sw['sign_after']}\n"
            )
        for rec in report.history:
            fh.write(
                f"mesh_{rec.index} = points={rec.n_collocation} domains={rec.n_domains} "
                f"objective={rec.objective:.12g} error={rec.error:.3e} "
                f"nlp_iterations={rec.nlp_iterations} wall_s={rec.wall_time:.4f}\n"
            )
