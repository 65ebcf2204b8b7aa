"""Rapid power-iteration DOA estimation for uniform linear arrays.

Provides snapshot synthesis for a single narrowband emitter, two fast
estimators that replace the covariance eigendecomposition with power
iteration (rotational-invariance and polynomial-rooting read-outs),
their full-EVD counterparts, the CRLB, and a Monte-Carlo / complexity
benchmark harness with a CSV-emitting CLI.
"""

from ._backend import HAS_NUMBA
from .array_model import (
    ArrayGeometry,
    SnapshotMatrix,
    SourceScenario,
    load_snapshots,
    save_snapshots,
    steering_vector,
    synthesize_snapshots,
)
from .bench import (
    ConvergenceCell,
    ConvergenceRow,
    ConvergenceSummary,
    CrlbValue,
    FlopReport,
    RmseReport,
    SweepConfig,
    convergence_study,
    crlb,
    derive_seed,
    flop_model,
    rmse_monte_carlo,
)
from .errors import EstimationFailureError, RootFindingError
from .estimators import (
    DoaEstimate,
    Method,
    StackedData,
    esprit_fd_estimate,
    music_polynomial_coefficients,
    noise_projector,
    rpi_pr_estimate,
    rpi_ri_estimate,
    root_music_fd_estimate,
    stack_subarrays,
    stacked_covariance,
    stacked_covariance_from_covariance,
)
from .linalg import (
    EvdResult,
    HermitianMatrix,
    PolynomialRoots,
    hermitian_evd,
    polynomial_roots,
    sample_covariance,
)
from .power_iteration import (
    AllOnes,
    Alternating,
    BasisVector,
    CustomInit,
    DftColumn,
    FourHot,
    HalvesSigned,
    InitialVectorSpec,
    NearSignal,
    PowerIterationResult,
    RandomInit,
    RowSum,
    ThreeHot,
    TwoHot,
    iteration_bound,
    make_initial_vector,
    orthogonality_defect,
    power_iterate,
    rayleigh_quotient,
)

__version__ = "0.1.0"
