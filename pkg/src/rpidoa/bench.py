"""CRLB evaluation, Monte-Carlo RMSE sweeps, convergence study, FLOP model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import ArrayGeometry, SourceScenario, synthesize_snapshots
from .errors import EstimationFailureError, RootFindingError
from .estimators import (
    Method,
    esprit_fd_estimate,
    rpi_pr_estimate,
    rpi_ri_estimate,
    root_music_fd_estimate,
    stacked_covariance_from_covariance,
)
from .linalg import sample_covariance
from .power_iteration import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITERATIONS,
    InitialVectorSpec,
    RandomInit,
    RowSum,
    power_iterate,
)

EVD_FLOP_CONSTANT = 21.0
DEFAULT_BETA = 5


# ---------------------------------------------------------------------------
# Cramer-Rao lower bound


@dataclass(frozen=True)
class CrlbValue:
    """Single-source DOA variance bound, in degrees^2 and degrees."""

    variance_deg2: float
    rmse_deg: float


def crlb(geometry: ArrayGeometry, scenario: SourceScenario, recenter: bool = True) -> CrlbValue:
    """Variance bound 1 / (8 pi^2 K SNR cos^2(theta) sum d_m^2).

    Element positions are measured in wavelengths and re-centered to
    their mean before the aperture sum (``recenter=False`` keeps the
    first-element origin, which inflates the aperture term and
    understates the bound; exposed for sensitivity checks only).
    """
    theta_rad = np.deg2rad(scenario.theta0_deg)
    cos_theta = np.cos(theta_rad)
    if abs(cos_theta) < 1e-12:
        raise ValueError("bound diverges at endfire (cos theta = 0)")
    positions = geometry.positions
    if recenter:
        positions = positions - positions.mean()
    aperture = float(np.sum(positions**2))
    snr_linear = 10.0 ** (scenario.snr_db / 10.0)
    variance_rad2 = 1.0 / (
        8.0 * np.pi**2 * scenario.k_snapshots * snr_linear * cos_theta**2 * aperture
    )
    variance_deg2 = variance_rad2 * np.degrees(1.0) ** 2
    return CrlbValue(variance_deg2=float(variance_deg2), rmse_deg=float(np.sqrt(variance_deg2)))


# ---------------------------------------------------------------------------
# Monte-Carlo RMSE sweeps


@dataclass(frozen=True)
class RmseReport:
    """RMSE of one method at one sweep point.

    Failed trials (estimation errors) are excluded from the RMSE and
    counted separately; ``rmse_deg`` is ``None`` when every trial
    failed.
    """

    method: Method
    sweep_name: str
    sweep_value: float
    n_antennas: int
    k_snapshots: int
    snr_db: float
    theta_deg: float
    trials: int
    failure_count: int
    rmse_deg: float | None
    crlb_rmse_deg: float
    mean_pi_iterations: float


@dataclass(frozen=True)
class SweepConfig:
    """One Monte-Carlo experiment: a parameter sweep over a method list.

    ``sweep_name`` is one of ``"snr_db"``, ``"n"``, ``"k"`` or
    ``"single"`` (no sweep; ``sweep_values`` ignored).  Per-trial seeds
    derive deterministically from ``master_seed`` and the (point, trial)
    indices, and all methods see identical data within a trial.
    """

    methods: tuple[Method, ...]
    sweep_name: str = "single"
    sweep_values: tuple[float, ...] = (0.0,)
    n_antennas: int = 64
    k_snapshots: int = 1000
    snr_db: float = 0.0
    theta0_deg: float = 50.0
    spacing: float = 0.5
    trials: int = 200
    master_seed: int = 1
    init: InitialVectorSpec = RowSum()
    epsilon: float = DEFAULT_EPSILON
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    noiseless: bool = False

    def __post_init__(self):
        if self.sweep_name not in ("snr_db", "n", "k", "single"):
            raise ValueError(f"unknown sweep_name {self.sweep_name!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.methods:
            raise ValueError("at least one method is required")
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        object.__setattr__(self, "sweep_values", tuple(self.sweep_values))


def derive_seed(master_seed: int, *key: int) -> int:
    """Deterministic, order-independent per-work-item seed."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(key))
    return int(ss.generate_state(1, np.uint64)[0])


def _point_params(config: SweepConfig, value: float) -> tuple[int, int, float]:
    n, k, snr = config.n_antennas, config.k_snapshots, config.snr_db
    if config.sweep_name == "snr_db":
        snr = float(value)
    elif config.sweep_name == "n":
        n = int(value)
    elif config.sweep_name == "k":
        k = int(value)
    return n, k, snr


def run_single_trial(
    config: SweepConfig,
    methods: tuple[Method, ...],
    n: int,
    k: int,
    snr_db: float,
    seed: int,
):
    """Synthesize one data block and run each method on it.

    Returns ``{method: DoaEstimate | EstimationFailureError}``.
    """
    geometry = ArrayGeometry(n, config.spacing)
    scenario = SourceScenario(config.theta0_deg, snr_db, k, seed)
    snapshots = synthesize_snapshots(geometry, scenario, noiseless=config.noiseless)
    cov = sample_covariance(snapshots)
    stacked = (
        stacked_covariance_from_covariance(cov)
        if any(m in (Method.RPI_RI, Method.ESPRIT_FD) for m in methods)
        else None
    )
    results = {}
    for method in methods:
        try:
            if method is Method.RPI_RI:
                est = rpi_ri_estimate(
                    snapshots, geometry, config.init, config.epsilon,
                    config.max_iterations, covariance=stacked,
                )
            elif method is Method.RPI_PR:
                est = rpi_pr_estimate(
                    snapshots, geometry, config.init, config.epsilon,
                    config.max_iterations, covariance=cov,
                )
            elif method is Method.ESPRIT_FD:
                est = esprit_fd_estimate(snapshots, geometry, covariance=stacked)
            else:
                est = root_music_fd_estimate(snapshots, geometry, covariance=cov)
        except (EstimationFailureError, RootFindingError) as exc:
            results[method] = exc
        else:
            results[method] = est
    return results


def rmse_monte_carlo(config: SweepConfig) -> list[RmseReport]:
    """Run the sweep and reduce per-method squared errors to RMSE reports.

    Report order is sweep point first, then the configured method order.
    """
    reports: list[RmseReport] = []
    for point_idx, value in enumerate(config.sweep_values):
        n, k, snr = _point_params(config, value)
        geometry = ArrayGeometry(n, config.spacing)
        scenario = SourceScenario(config.theta0_deg, snr, k, 0)
        bound = crlb(geometry, scenario)
        sq_sum = {m: 0.0 for m in config.methods}
        iters = {m: 0 for m in config.methods}
        successes = {m: 0 for m in config.methods}
        failures = {m: 0 for m in config.methods}
        for trial in range(config.trials):
            seed = derive_seed(config.master_seed, point_idx, trial)
            outcome = run_single_trial(config, config.methods, n, k, snr, seed)
            for method, result in outcome.items():
                if isinstance(result, Exception):
                    failures[method] += 1
                else:
                    sq_sum[method] += (result.theta_deg - config.theta0_deg) ** 2
                    iters[method] += result.pi_iterations
                    successes[method] += 1
        for method in config.methods:
            ok = successes[method]
            reports.append(
                RmseReport(
                    method=method,
                    sweep_name=config.sweep_name,
                    sweep_value=float(value),
                    n_antennas=n,
                    k_snapshots=k,
                    snr_db=snr,
                    theta_deg=config.theta0_deg,
                    trials=config.trials,
                    failure_count=failures[method],
                    rmse_deg=float(np.sqrt(sq_sum[method] / ok)) if ok else None,
                    crlb_rmse_deg=bound.rmse_deg,
                    mean_pi_iterations=iters[method] / ok if ok else 0.0,
                )
            )
    return reports


# ---------------------------------------------------------------------------
# convergence study


@dataclass(frozen=True)
class ConvergenceCell:
    """One (initial vector, scenario) cell of the convergence study."""

    init: InitialVectorSpec
    label: str
    n_antennas: int = 64
    k_snapshots: int = 1000
    snr_db: float = 0.0
    theta0_deg: float = 50.0
    spacing: float = 0.5
    epsilon: float = DEFAULT_EPSILON
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    trials: int = 50


@dataclass(frozen=True)
class ConvergenceRow:
    """Residual of one power-iteration step in one trial."""

    init: str
    n_antennas: int
    k_snapshots: int
    snr_db: float
    theta_deg: float
    trial: int
    iteration: int
    residual: float
    converged: bool


@dataclass(frozen=True)
class ConvergenceSummary:
    """Per-cell aggregate of the convergence study."""

    init: str
    n_antennas: int
    k_snapshots: int
    snr_db: float
    theta_deg: float
    trials: int
    mean_iterations: float
    max_iterations_observed: int
    non_converged: int


def convergence_study(
    cells: list[ConvergenceCell] | tuple[ConvergenceCell, ...],
    master_seed: int = 1,
) -> tuple[list[ConvergenceRow], list[ConvergenceSummary]]:
    """Power-iteration residual histories on freshly synthesized covariances.

    Every trial draws new snapshots, builds the plain covariance and
    iterates from the cell's initial vector.  ``RandomInit`` cells
    redraw the start vector per trial from seeds derived alongside the
    data seeds.  Non-convergent trials are flagged, not dropped.
    """
    rows: list[ConvergenceRow] = []
    summaries: list[ConvergenceSummary] = []
    for cell_idx, cell in enumerate(cells):
        geometry = ArrayGeometry(cell.n_antennas, cell.spacing)
        total_iters = 0
        worst = 0
        non_converged = 0
        for trial in range(cell.trials):
            data_seed = derive_seed(master_seed, cell_idx, trial, 0)
            scenario = SourceScenario(cell.theta0_deg, cell.snr_db, cell.k_snapshots, data_seed)
            cov = sample_covariance(synthesize_snapshots(geometry, scenario))
            init = cell.init
            if isinstance(init, RandomInit):
                init = RandomInit(derive_seed(master_seed, cell_idx, trial, 1))
            result = power_iterate(
                cov, init, epsilon=cell.epsilon, max_iterations=cell.max_iterations
            )
            total_iters += result.iterations
            worst = max(worst, result.iterations)
            non_converged += 0 if result.converged else 1
            for step, residual in enumerate(result.residual_history, start=1):
                rows.append(
                    ConvergenceRow(
                        init=cell.label,
                        n_antennas=cell.n_antennas,
                        k_snapshots=cell.k_snapshots,
                        snr_db=cell.snr_db,
                        theta_deg=cell.theta0_deg,
                        trial=trial,
                        iteration=step,
                        residual=float(residual),
                        converged=result.converged,
                    )
                )
        summaries.append(
            ConvergenceSummary(
                init=cell.label,
                n_antennas=cell.n_antennas,
                k_snapshots=cell.k_snapshots,
                snr_db=cell.snr_db,
                theta_deg=cell.theta0_deg,
                trials=cell.trials,
                mean_iterations=total_iters / cell.trials,
                max_iterations_observed=worst,
                non_converged=non_converged,
            )
        )
    return rows, summaries


# ---------------------------------------------------------------------------
# FLOP model


@dataclass(frozen=True)
class FlopReport:
    """Closed-form operation count for one method at one problem size."""

    method: Method
    n_antennas: int
    k_snapshots: int
    beta: int
    flops: float


def flop_model(
    method: Method | str,
    n: int,
    k: int,
    beta: int = DEFAULT_BETA,
    evd_constant: float = EVD_FLOP_CONSTANT,
) -> FlopReport:
    """Operation counts: closed forms for the power-iteration methods,
    covariance-plus-cubic-EVD model for the full-decomposition baselines.

    ``beta`` is the power-iteration count.  ``evd_constant`` scales the
    cubic EVD term of the baselines (a model knob, not a measurement).
    """
    method = Method(method)
    if n < 2 or k < 1 or beta < 1:
        raise ValueError(f"need n >= 2, k >= 1, beta >= 1; got n={n}, k={k}, beta={beta}")
    m_stacked = 2 * n - 2
    if method is Method.RPI_RI:
        flops = beta * m_stacked**2 + 2 * n - 3
    elif method is Method.RPI_PR:
        flops = (beta + 8) * n**2 + n * k * (2 * n + 3) - 11 * n + 4
    elif method is Method.ESPRIT_FD:
        flops = m_stacked**2 * k + evd_constant * m_stacked**3
    else:
        flops = n**2 * k + evd_constant * n**3
    return FlopReport(method=method, n_antennas=n, k_snapshots=k, beta=beta, flops=float(flops))
