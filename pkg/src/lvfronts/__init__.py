"""Numerical laboratory for fronts in the strongly competitive
Lotka-Volterra diffusion system: traveling-wave solvers, a monotone
finite-difference simulator, comparison-pair (super/subsolution)
verification and front-position analysis."""

from .model import (
    ModelParams,
    SpeedSet,
    CharacteristicRoots,
    Sign,
    SignPrediction,
    canonical_speeds,
    char_roots,
    predict_front_sign,
)
from .waves import (
    WaveProfile,
    DecayFit,
    WaveSolveError,
    solve_bistable_wave,
    solve_kpp_profile,
    solve_perturbed_wave,
    fit_tail_decay,
)

__version__ = "0.1.0"

# modules below import __version__, so these imports stay after it
from .sim import (
    Grid,
    FieldState,
    InitialCondition,
    Trajectory,
    ComparisonReport,
    make_initial,
    default_dt,
    simulate,
    comparison_check,
)
from .fronts import (
    FrontTrace,
    SpeedEstimate,
    BramsonFit,
    ShiftEstimate,
    SegregationSeries,
    TerraceReport,
    level_set,
    track_front,
    estimate_speed,
    fit_bramson,
    estimate_shift,
    segregation_metric,
    detect_terrace,
)
from .pairs import (
    FAMILIES,
    SuperSubParams,
    ConstraintReport,
    ComparisonPair,
    ResidualReport,
    Certificate,
    check_constraints,
    build_pair,
    evaluate_residuals,
    residuals_fd,
    invasion_certificate,
)
from .config import ConfigError, ExperimentConfig, parse_config
from .runner import RunManifest, run_experiment, sweep
