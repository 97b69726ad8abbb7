"""symverify: simulate symmetrization verification in two-particle systems.

Prepare two-particle multimode states with bosonic, fermionic, or
distinguishable statistics, apply destructive one-particle detection, and
statistically discriminate the surviving particle's pure-superposition
hypothesis from the mixture alternative using simulated detector-array
data.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import (
    ConfigError,
    DegenerateGrid,
    EmptySupport,
    GridMismatch,
    ModelDegenerate,
    NodalPointUndefined,
    NormalizationError,
    NullStateError,
    RedrawCapExceeded,
    SeparationTooSmall,
    SymverifyError,
    TruncationError,
)
from .experiment import (
    ChiSquareResult,
    Conditioning,
    DiscriminationReport,
    EventRecord,
    ExperimentConfig,
    PeakReport,
    ScenarioResult,
    TrialRunResult,
    Truth,
    chi_square_gof,
    discriminate,
    run_and_discriminate,
    run_trials,
    sample_first_detection,
    scenario_superposition,
)
from .fock import (
    CollapseOutcome,
    Statistics,
    TwoParticleState,
    collapse,
    collapse_distinguishable,
    detection_density,
    two_particle_norm_sq,
)
from .patterns import (
    DetectionPattern,
    PatternKind,
    SignInference,
    infer_sign,
    mixture_pattern,
    pattern_distance,
    pure_pattern,
    save_pattern,
)
from .rng import CounterStream
from .wavepacket import (
    ModeDistribution,
    MomentumGrid,
    PositionGrid,
    SpatialAmplitude,
    load_mode_distribution,
    make_gaussian,
    overlap,
    position_amplitude,
    save_mode_distribution,
    superpose,
    to_position,
)
