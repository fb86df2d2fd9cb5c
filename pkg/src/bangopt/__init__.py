"""Direct LGR collocation with automatic bang-bang structure detection."""

from .lgr import (
    MeshLayout,
    QuadratureRule,
    affine_to_time,
    diff_matrix,
    interpolate,
    lgr_rule,
    time_to_tau,
)
from .hyperdual import HyperDual, EvaluationError, second_partials
from .ocp import (
    BolzaProblem,
    CollocatedSolution,
    Guess,
    MultiDomainProblem,
    SwitchParam,
    as_single_domain,
    validate,
)
from .transcribe import NlpProblem, Transcription, VariableLayout, assemble, hamiltonian
from .ipm import NlpResult, SolverOptions, solve
from .refine import (
    DiscontinuityEstimate,
    DriveResult,
    LinearityReport,
    RefineConfig,
    SwitchingProfile,
    build_multidomain,
    detect_linearity,
    drive,
    error_estimate,
    estimate_discontinuities,
    standard_refine,
    switching_functions,
)
from .benchmarks import BenchmarkSpec, RunReport, benchmark_problem, export_trajectory, report_table, run

__all__ = [
    "MeshLayout",
    "QuadratureRule",
    "affine_to_time",
    "diff_matrix",
    "interpolate",
    "lgr_rule",
    "time_to_tau",
    "HyperDual",
    "EvaluationError",
    "second_partials",
    "BolzaProblem",
    "CollocatedSolution",
    "Guess",
    "MultiDomainProblem",
    "SwitchParam",
    "as_single_domain",
    "validate",
    "NlpProblem",
    "Transcription",
    "VariableLayout",
    "assemble",
    "hamiltonian",
    "NlpResult",
    "SolverOptions",
    "solve",
    "DiscontinuityEstimate",
    "DriveResult",
    "LinearityReport",
    "RefineConfig",
    "SwitchingProfile",
    "build_multidomain",
    "detect_linearity",
    "drive",
    "error_estimate",
    "estimate_discontinuities",
    "standard_refine",
    "switching_functions",
    "BenchmarkSpec",
    "RunReport",
    "benchmark_problem",
    "export_trajectory",
    "report_table",
    "run",
]
