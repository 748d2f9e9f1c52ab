"""Numerical toolkit for quantum dichotomies.

A dichotomy is an ordered pair of density matrices (rho, sigma).  The package
computes divergences between the arms (asymptotic and one-shot, all in bits),
synthesizes test-and-prepare channels converting one dichotomy into another,
runs tensor-power conversion-rate experiments, and exposes thermodynamic and
coherence-theoretic readings of the same machinery.
"""

__version__ = "0.1.0"

from .states import (  # noqa: F401
    BinaryDistribution,
    DensityMatrix,
    Dichotomy,
    Metric,
    ValidationError,
    classical_dichotomy,
    classical_embed,
    fidelity,
    purified_distance,
    random_density,
    tensor_power,
    trace_distance,
)
from .divergences import (  # noqa: F401
    d_max,
    d_min,
    petz_renyi,
    relative_entropy,
    relative_entropy_variance,
    sandwiched_renyi,
)
from .oneshot import (  # noqa: F401
    Effect,
    HypothesisTestResult,
    SmoothMaxResult,
    check_dh_dmax_relation,
    check_renyi_bounds,
    classical_oneshot,
    hypothesis_testing,
    smooth_dmax,
)
from .channels import (  # noqa: F401
    ApproxSynthesis,
    GeneralChannel,
    SynthesisRefusedError,
    TestAndPrepareChannel,
    VerificationReport,
    channel_from_json,
    channel_to_json,
    random_channel,
    synthesize_approx,
    synthesize_exact,
    verify_transformation,
)
from .asymptotics import (  # noqa: F401
    ExperimentConfig,
    ExperimentRecord,
    NearCriticalError,
    SweepResult,
    achievable_m,
    check_sequence_condition,
    critical_rate,
    error_exponent_sweep,
    rate_curve,
    records_to_csv,
)
from .resource import (  # noqa: F401
    AthermalityReport,
    GibbsSpec,
    athermality_feasible,
    coherence_distillation_rate,
    dephase,
    dio_transformation_rate,
    free_energy,
    gibbs_state,
    is_dio,
    is_rho_dio,
)
