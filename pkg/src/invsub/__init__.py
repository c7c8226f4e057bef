"""Inverse stable subordinators, time-changed stable processes and their envelopes."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    DegenerateGrid,
    DegenerateRe,
    DomainError,
    EmptySample,
    IndexOutOfRange,
    InsufficientSamples,
    InvsubError,
    NoConvergence,
    NonpositiveScale,
    ParameterError,
    QueryBeyondRange,
    SkewOutOfRange,
)
from .mittag_leffler import MLConfig, laplace_E, ml_neg, ml_tail_constant  # noqa: E402
from .rng import RngStream  # noqa: E402
from .stable_core import (  # noqa: E402
    StableParams,
    SubordinatorParams,
    char_function,
    sample_positive_stable,
    sample_stable,
    sample_subordinator_increment,
    validate_params,
)
from .pathsim import (  # noqa: E402
    CompositionSpec,
    GridPath,
    PathKind,
    bochner_sample,
    compose_z,
    inverse_path,
    levy_local_time_oracle,
    local_time_clock,
    running_sup,
    simulate_driver_path,
    simulate_subordinator_path,
)
from .asymptotics import DerivedConstants, derive_constants, stone_rho  # noqa: E402
from .smallball import (  # noqa: E402
    SmallBallSeriesConfig,
    chung_smallball_bm,
    mc_smallball,
    selfsimilar_envelope,
    smallball_Z_limit_constant,
    smallball_Z_series,
)
from .statstest import EstimateWithCI, ks_one_sample, ks_two_sample  # noqa: E402
