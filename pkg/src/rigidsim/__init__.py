"""Distance-based rigid formation control with quantized distance measurements.

A simulation library and CLI for gradient formation controllers whose
distance feedback passes through one of four scalar quantizers (symmetric
uniform, logarithmic, signum, asymmetric uniform), together with the
structural certificates of the closed loop: rigidity rank tests, Lyapunov
monitoring, finite-time bounds, and convergence-set classification.
"""

from .analysis import (
    ConvergenceReport,
    TwoAgentPrediction,
    check_convergence,
    finite_time_bound,
    lambda_min_probe,
    lyapunov,
    q_matrix,
    smallest_eigenvalue,
    two_agent_oracle,
)
from .config import PerturbationSpec, SimulationConfig, load_config, save_config
from .dynamics import (
    ControlInput,
    IntegratorConfig,
    Trajectory,
    control,
    distance_errors,
    simulate,
    step,
)
from .errors import (
    CollocatedAgents,
    DegenerateFramework,
    NonPositiveEigenvalue,
    ParseError,
    RigidSimError,
    ValidationError,
)
from .graphs import (
    COLLOCATION_THRESHOLD,
    RANK_REL_TOL,
    FormationGraph,
    Framework,
    RigidityReport,
    edge_lengths,
    incidence_matrix,
    relative_positions,
    rigidity_check,
    rigidity_matrix,
    unit_bearings,
)
from .presets import (
    DEFAULT_MAGNITUDE,
    DEFAULT_SEED,
    PRESETS,
    perturbed_framework,
    preset_graph,
    preset_positions,
    two_agent_framework,
)
from .quantizers import (
    KINDS,
    LOGARITHMIC,
    SIGNUM,
    UNIFORM_ASYM,
    UNIFORM_SYM,
    HysteresisSignum,
    QuantizerSpec,
    quantization_error_bound,
    quantize,
    staircase_integral,
)

__version__ = "0.1.0"

__all__ = [
    "COLLOCATION_THRESHOLD",
    "CollocatedAgents",
    "ControlInput",
    "ConvergenceReport",
    "DEFAULT_MAGNITUDE",
    "DEFAULT_SEED",
    "DegenerateFramework",
    "FormationGraph",
    "Framework",
    "HysteresisSignum",
    "IntegratorConfig",
    "KINDS",
    "LOGARITHMIC",
    "NonPositiveEigenvalue",
    "PRESETS",
    "ParseError",
    "PerturbationSpec",
    "QuantizerSpec",
    "RANK_REL_TOL",
    "RigidSimError",
    "RigidityReport",
    "SIGNUM",
    "SimulationConfig",
    "Trajectory",
    "TwoAgentPrediction",
    "UNIFORM_ASYM",
    "UNIFORM_SYM",
    "ValidationError",
    "check_convergence",
    "control",
    "distance_errors",
    "edge_lengths",
    "finite_time_bound",
    "incidence_matrix",
    "lambda_min_probe",
    "load_config",
    "lyapunov",
    "perturbed_framework",
    "preset_graph",
    "preset_positions",
    "q_matrix",
    "quantization_error_bound",
    "quantize",
    "relative_positions",
    "rigidity_check",
    "rigidity_matrix",
    "save_config",
    "simulate",
    "smallest_eigenvalue",
    "staircase_integral",
    "step",
    "two_agent_framework",
    "two_agent_oracle",
    "unit_bearings",
]
