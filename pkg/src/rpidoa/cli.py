"""Command-line front end: single-shot estimation, Monte-Carlo sweeps,
convergence studies, FLOP counts and CRLB values, all emitted as CSV.

Exit status: 0 on success, 1 on configuration errors, 2 on numeric or
estimation failures.  Output goes to ``--output`` (relative paths are
resolved against ``RPIDOA_OUTPUT_DIR`` when set) or standard output.
Identical argument vectors produce byte-identical CSV.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .array_model import ArrayGeometry, SourceScenario, synthesize_snapshots
from .bench import (
    ConvergenceCell,
    SweepConfig,
    convergence_study,
    crlb,
    derive_seed,
    flop_model,
    rmse_monte_carlo,
    run_single_trial,
)
from .errors import EstimationFailureError, RootFindingError
from .estimators import Method
from .power_iteration import (
    AllOnes,
    Alternating,
    BasisVector,
    DftColumn,
    HalvesSigned,
    NearSignal,
    RandomInit,
    RowSum,
)

SWEEP_HEADER = (
    "method,sweep_name,sweep_value,n,k,snr_db,theta_deg,trials,failures,"
    "rmse_deg,crlb_rmse_deg,mean_pi_iters"
)
CONVERGENCE_HEADER = "init,n,k,snr_db,theta_deg,trial,iteration,residual,converged"
FLOPS_HEADER = "method,n,k,beta,flops"
ESTIMATE_HEADER = "method,n,k,snr_db,theta_true_deg,theta_hat_deg,pi_iterations,phase"
CRLB_HEADER = "n,k,snr_db,theta_deg,spacing,variance_deg2,rmse_deg"


class CliConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports bad flags as exit status 1 instead of 2."""

    def error(self, message):
        raise CliConfigError(message)


def _fmt(value) -> str:
    """Shortest round-trip decimal for reals; empty cell for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_methods(text: str) -> tuple[Method, ...]:
    methods = []
    for name in text.split(","):
        name = name.strip()
        try:
            methods.append(Method(name))
        except ValueError:
            valid = ", ".join(m.value for m in Method)
            raise CliConfigError(f"unknown method {name!r} (choose from: {valid})")
    return tuple(methods)


def _parse_init(text: str, master_seed: int, spacing: float):
    name, _, arg = text.strip().partition(":")
    name = name.lower()
    if name == "rowsum":
        return RowSum()
    if name == "random":
        return RandomInit(derive_seed(master_seed, 0xB0))
    if name in ("all-ones", "allones", "ones"):
        return AllOnes()
    if name == "alternating":
        return Alternating()
    if name in ("halves", "halves-signed"):
        return HalvesSigned()
    if name == "dft":
        return DftColumn()
    if name == "basis":
        try:
            return BasisVector(int(arg or "1"))
        except ValueError as exc:
            raise CliConfigError(f"bad basis index in {text!r}: {exc}")
    if name in ("near", "near-signal"):
        try:
            return NearSignal(float(arg), spacing=spacing)
        except ValueError:
            raise CliConfigError(f"near-signal init needs an angle, e.g. near:50 (got {text!r})")
    raise CliConfigError(
        f"unknown init {text!r} (choose from: rowsum, random, all-ones, alternating, "
        "halves, dft, basis:K, near:THETA)"
    )


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise CliConfigError(f"bad value in {flag}: {exc}")


def _grid(from_value, to_value, step, values, flag: str) -> tuple[float, ...]:
    if values is not None:
        return _parse_float_list(values, flag)
    if step <= 0:
        raise CliConfigError(f"{flag} step must be positive")
    points, current = [], from_value
    while current <= to_value + 1e-9:
        points.append(current)
        current += step
    if not points:
        raise CliConfigError(f"{flag} range is empty")
    return tuple(points)


def _write_output(lines: list[str], output: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get("RPIDOA_OUTPUT_DIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _add_common(parser, trials_default=200):
    parser.add_argument("--n", type=int, default=64, help="number of antennas")
    parser.add_argument("--k", type=int, default=1000, help="number of snapshots")
    parser.add_argument("--theta-deg", type=float, default=50.0, help="true source angle")
    parser.add_argument("--spacing", type=float, default=0.5, help="element spacing in wavelengths")
    parser.add_argument("--seed", type=int, default=1, help="master seed")
    parser.add_argument("--init", default="rowsum", help="power-iteration start vector")
    parser.add_argument("--epsilon", type=float, default=1e-6, help="power-iteration tolerance")
    parser.add_argument("--trials", type=int, default=trials_default, help="Monte-Carlo trials")
    parser.add_argument("--output", default=None, help="CSV output path (default: stdout)")


def build_parser() -> _Parser:
    parser = _Parser(prog="rpidoa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[], help="single-shot estimation on one synthesized block")
    _add_common(p)
    p.add_argument("--method", default="rpi-pr", help="comma-separated method list")
    p.add_argument("--snr-db", type=float, default=0.0)
    p.add_argument("--noiseless", action="store_true")

    p = sub.add_parser("sweep-snr", help="RMSE vs per-antenna SNR")
    _add_common(p)
    p.add_argument("--methods", default="rpi-ri,rpi-pr,esprit,root-music")
    p.add_argument("--snr-from", type=float, default=-10.0)
    p.add_argument("--snr-to", type=float, default=10.0)
    p.add_argument("--snr-step", type=float, default=2.0)
    p.add_argument("--snr-values", default=None, help="explicit comma-separated grid")

    p = sub.add_parser("sweep-n", help="RMSE vs number of antennas")
    _add_common(p)
    p.add_argument("--methods", default="rpi-ri,rpi-pr,esprit,root-music")
    p.add_argument("--snr-db", type=float, default=0.0)
    p.add_argument("--n-from", type=float, default=16)
    p.add_argument("--n-to", type=float, default=272)
    p.add_argument("--n-step", type=float, default=64)
    p.add_argument("--n-values", default=None)

    p = sub.add_parser("sweep-k", help="RMSE vs number of snapshots")
    _add_common(p)
    p.add_argument("--methods", default="rpi-ri,rpi-pr,esprit,root-music")
    p.add_argument("--snr-db", type=float, default=0.0)
    p.add_argument("--k-from", type=float, default=100)
    p.add_argument("--k-to", type=float, default=3600)
    p.add_argument("--k-step", type=float, default=700)
    p.add_argument("--k-values", default=None)

    p = sub.add_parser("convergence", help="power-iteration residual histories")
    _add_common(p, trials_default=50)
    p.add_argument("--inits", default="rowsum,random", help="comma-separated init list")
    p.add_argument("--snr-db", default="0", help="comma-separated SNR list in dB")
    p.add_argument("--max-iterations", type=int, default=200)

    p = sub.add_parser("flops", help="closed-form complexity model")
    p.add_argument("--methods", default="rpi-ri,rpi-pr,esprit,root-music")
    p.add_argument("--n-from", type=float, default=16)
    p.add_argument("--n-to", type=float, default=1024)
    p.add_argument("--n-step", type=float, default=64)
    p.add_argument("--n-values", default=None)
    p.add_argument("--geometric", action="store_true", help="double n at each step")
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--beta", type=int, default=5, help="assumed power-iteration count")
    p.add_argument("--evd-constant", type=float, default=21.0)
    p.add_argument("--output", default=None)

    p = sub.add_parser("crlb", help="Cramer-Rao lower bound")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--snr-db", type=float, default=0.0)
    p.add_argument("--theta-deg", type=float, default=50.0)
    p.add_argument("--spacing", type=float, default=0.5)
    p.add_argument("--first-element-origin", action="store_true",
                   help="skip re-centering the element positions")
    p.add_argument("--output", default=None)
    return parser


def _cmd_estimate(args) -> int:
    methods = _parse_methods(args.method)
    ArrayGeometry(args.n, args.spacing)  # validate before any work
    SourceScenario(args.theta_deg, args.snr_db, args.k, args.seed)
    config = SweepConfig(
        methods=methods,
        n_antennas=args.n,
        k_snapshots=args.k,
        snr_db=args.snr_db,
        theta0_deg=args.theta_deg,
        spacing=args.spacing,
        trials=1,
        master_seed=args.seed,
        init=_parse_init(args.init, args.seed, args.spacing),
        epsilon=args.epsilon,
        noiseless=args.noiseless,
    )
    outcome = run_single_trial(config, methods, args.n, args.k, args.snr_db, args.seed)
    lines = [ESTIMATE_HEADER]
    failed = None
    for method in methods:
        result = outcome[method]
        if isinstance(result, Exception):
            failed = result
            continue
        lines.append(
            ",".join(
                [
                    method.value,
                    _fmt(args.n),
                    _fmt(args.k),
                    _fmt(float(args.snr_db)),
                    _fmt(float(args.theta_deg)),
                    _fmt(result.theta_deg),
                    _fmt(result.pi_iterations),
                    _fmt(result.phase),
                ]
            )
        )
    _write_output(lines, args.output)
    if failed is not None:
        print(f"estimation failed: {failed}", file=sys.stderr)
        return 2
    return 0


def _run_sweep(args, sweep_name: str, values) -> int:
    config = SweepConfig(
        methods=_parse_methods(args.methods),
        sweep_name=sweep_name,
        sweep_values=values,
        n_antennas=args.n if hasattr(args, "n") else 64,
        k_snapshots=args.k if hasattr(args, "k") else 1000,
        snr_db=getattr(args, "snr_db", 0.0),
        theta0_deg=args.theta_deg,
        spacing=args.spacing,
        trials=args.trials,
        master_seed=args.seed,
        init=_parse_init(args.init, args.seed, args.spacing),
        epsilon=args.epsilon,
    )
    lines = [SWEEP_HEADER]
    for report in rmse_monte_carlo(config):
        lines.append(
            ",".join(
                [
                    report.method.value,
                    report.sweep_name,
                    _fmt(report.sweep_value),
                    _fmt(report.n_antennas),
                    _fmt(report.k_snapshots),
                    _fmt(float(report.snr_db)),
                    _fmt(float(report.theta_deg)),
                    _fmt(report.trials),
                    _fmt(report.failure_count),
                    _fmt(report.rmse_deg),
                    _fmt(report.crlb_rmse_deg),
                    _fmt(float(report.mean_pi_iterations)),
                ]
            )
        )
    _write_output(lines, args.output)
    return 0


def _cmd_convergence(args) -> int:
    cells = []
    snrs = _parse_float_list(args.snr_db, "--snr-db")
    for init_name in args.inits.split(","):
        init_name = init_name.strip()
        for snr in snrs:
            cells.append(
                ConvergenceCell(
                    init=_parse_init(init_name, args.seed, args.spacing),
                    label=init_name,
                    n_antennas=args.n,
                    k_snapshots=args.k,
                    snr_db=snr,
                    theta0_deg=args.theta_deg,
                    spacing=args.spacing,
                    epsilon=args.epsilon,
                    max_iterations=args.max_iterations,
                    trials=args.trials,
                )
            )
    rows, _summaries = convergence_study(cells, master_seed=args.seed)
    lines = [CONVERGENCE_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [
                    row.init,
                    _fmt(row.n_antennas),
                    _fmt(row.k_snapshots),
                    _fmt(float(row.snr_db)),
                    _fmt(float(row.theta_deg)),
                    _fmt(row.trial),
                    _fmt(row.iteration),
                    _fmt(row.residual),
                    _fmt(row.converged),
                ]
            )
        )
    _write_output(lines, args.output)
    return 0


def _cmd_flops(args) -> int:
    if args.geometric:
        if args.n_values is not None:
            values = _parse_float_list(args.n_values, "--n-values")
        else:
            values, current = [], args.n_from
            while current <= args.n_to + 1e-9:
                values.append(current)
                current *= 2
    else:
        values = _grid(args.n_from, args.n_to, args.n_step, args.n_values, "--n")
    methods = _parse_methods(args.methods)
    lines = [FLOPS_HEADER]
    for value in values:
        for method in methods:
            report = flop_model(method, int(value), args.k, args.beta, args.evd_constant)
            lines.append(
                ",".join(
                    [
                        report.method.value,
                        _fmt(report.n_antennas),
                        _fmt(report.k_snapshots),
                        _fmt(report.beta),
                        _fmt(report.flops),
                    ]
                )
            )
    _write_output(lines, args.output)
    return 0


def _cmd_crlb(args) -> int:
    geometry = ArrayGeometry(args.n, args.spacing)
    scenario = SourceScenario(args.theta_deg, args.snr_db, args.k, 0)
    bound = crlb(geometry, scenario, recenter=not args.first_element_origin)
    lines = [
        CRLB_HEADER,
        ",".join(
            [
                _fmt(args.n),
                _fmt(args.k),
                _fmt(float(args.snr_db)),
                _fmt(float(args.theta_deg)),
                _fmt(float(args.spacing)),
                _fmt(bound.variance_deg2),
                _fmt(bound.rmse_deg),
            ]
        ),
    ]
    _write_output(lines, args.output)
    return 0


def run(argv) -> int:
    """Parse ``argv`` and execute exactly one subcommand."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "sweep-snr":
            return _run_sweep(
                args, "snr_db", _grid(args.snr_from, args.snr_to, args.snr_step,
                                      args.snr_values, "--snr")
            )
        if args.command == "sweep-n":
            return _run_sweep(
                args, "n", _grid(args.n_from, args.n_to, args.n_step, args.n_values, "--n")
            )
        if args.command == "sweep-k":
            return _run_sweep(
                args, "k", _grid(args.k_from, args.k_to, args.k_step, args.k_values, "--k")
            )
        if args.command == "convergence":
            return _cmd_convergence(args)
        if args.command == "flops":
            return _cmd_flops(args)
        if args.command == "crlb":
            return _cmd_crlb(args)
        raise CliConfigError(f"unknown command {args.command!r}")
    except (CliConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EstimationFailureError, RootFindingError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
