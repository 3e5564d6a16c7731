"""pbwsim: coherence photonic de Broglie waves from cascaded MZI chains.

A small numpy library that composes two-port interferometer blocks as 2x2
complex transfer matrices, sweeps the drive phase, extracts intensity
correlations and their effective de Broglie wavelength, and quantifies how
loss and phase jitter degrade the fringes.
"""

__version__ = "0.1.0"

from .errors import NoModulationError, ValidationError
from .linalg import (
    IDENTITY,
    apply,
    field_pair,
    intensities,
    intensity,
    is_unitary,
    mat_mul,
    mat_pow,
    max_abs_diff,
    total_intensity,
    transfer_matrix,
)
from .elements import (
    ChainConfig,
    MagicPhase,
    beam_splitter,
    bs_anticorrelation,
    ccd_block,
    chain_closed_form,
    chain_output,
    d_block,
    d_prime_block,
    input_field,
    loss,
    phase_lower,
    phase_upper,
)
from .dsl import (
    Bs,
    Ccd,
    Circuit,
    CircuitSyntaxError,
    D,
    DPrime,
    Literal,
    LiteralPi,
    Loss,
    Ps,
    Repeat,
    SweepVar,
    compile_circuit,
    expand,
    parse,
    phase_value,
    pretty_print,
)
from .analysis import (
    SPEED_OF_LIGHT,
    AnalysisResult,
    CoherenceBudget,
    CorrelationTrace,
    analyze_trace,
    coherence_budget,
    de_broglie_wavelength,
    detect_period,
    fringe_visibility,
    g2_first_order,
    g2_trace,
    g2_trace_from_matrix,
    intensities_n,
    read_trace_csv,
    write_trace_csv,
)
from .noise import (
    JITTER_MODES,
    NoiseConfig,
    NoisyTrace,
    anticorrelation_error_rate,
    jittered_intensities,
    run_noise_ensemble,
    write_noisy_trace_csv,
)

__all__ = [
    "__version__",
    "AnalysisResult",
    "Bs",
    "Ccd",
    "ChainConfig",
    "Circuit",
    "CircuitSyntaxError",
    "CoherenceBudget",
    "CorrelationTrace",
    "D",
    "DPrime",
    "IDENTITY",
    "JITTER_MODES",
    "Literal",
    "LiteralPi",
    "Loss",
    "MagicPhase",
    "NoModulationError",
    "NoiseConfig",
    "NoisyTrace",
    "Ps",
    "Repeat",
    "SPEED_OF_LIGHT",
    "SweepVar",
    "ValidationError",
    "analyze_trace",
    "apply",
    "beam_splitter",
    "bs_anticorrelation",
    "ccd_block",
    "chain_closed_form",
    "chain_output",
    "coherence_budget",
    "compile_circuit",
    "d_block",
    "d_prime_block",
    "de_broglie_wavelength",
    "detect_period",
    "expand",
    "field_pair",
    "fringe_visibility",
    "g2_first_order",
    "g2_trace",
    "g2_trace_from_matrix",
    "input_field",
    "intensities",
    "intensities_n",
    "intensity",
    "is_unitary",
    "jittered_intensities",
    "loss",
    "mat_mul",
    "mat_pow",
    "max_abs_diff",
    "parse",
    "phase_lower",
    "phase_upper",
    "phase_value",
    "pretty_print",
    "read_trace_csv",
    "run_noise_ensemble",
    "total_intensity",
    "transfer_matrix",
    "write_noisy_trace_csv",
    "write_trace_csv",
]
