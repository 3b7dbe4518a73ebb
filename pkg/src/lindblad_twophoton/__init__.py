"""Open-system simulation of N qubits coupled to a driven, damped oscillator
through one- or two-photon exchange, with the oscillator either kept in a
truncated Fock space or adiabatically eliminated."""

__version__ = "0.1.0"

from .errors import (
    CapExceededError,
    ConvergenceError,
    DegenerateSteadyStateError,
    IntegrationError,
    InvalidDimensionError,
    InvalidModelError,
    LindbladError,
    SteadyStateError,
    TruncationError,
    UnmappableError,
)
from .hilbert import (
    DensityMatrix,
    HilbertSpace,
    Operator,
    annihilation,
    collective_ops,
    default_n_cut,
    embed,
    ho_displaced_thermal,
    qubit_ops,
    required_n_cut,
    tensor,
)
from .model import (
    EffectiveParams,
    LindbladGenerator,
    ModelParams,
    ValidityReport,
    Verdict,
    build_effective_generator,
    build_full_generator,
    effective_params,
    effective_temperature,
    effective_temperature_nbar,
    excitation_labels,
    map_2ph_to_1ph,
    n2_alternative,
    nbar_double_frequency,
    nbar_from_temperature,
    temperature_from_nbar,
    validity,
)
from .dynamics import (
    Trajectory,
    coherence,
    evolve,
    excited_population,
    expectation,
    j_corr,
    oscillator_marginal,
    partial_trace,
    qubit_marginal,
    rhs,
)
from .steady import (
    AnalyticOneQubitSteady,
    TwoQubitJcorrAnalytic,
    liouvillian,
    one_qubit_large_alpha_limit,
    one_qubit_steady_analytic,
    steady_state,
    steady_state_longtime,
    steady_state_sparse,
    trace_distance,
    two_qubit_jcorr_analytic,
)
