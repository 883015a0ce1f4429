"""Command-line interface: test, spectrum, simulate, and mvtest commands.

Every run is a pure function of its flags and input files; re-running with
the same arguments produces identical output bytes.  Exit codes: 0 success,
2 data error (missing/ill-formed input), 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .distributions import gumbel_quantile
from .errors import DegeneracyError
from .ingest import (
    BasisSpec,
    GridSeries,
    fit_basis,
    read_coef_csv,
    read_grid_csv,
    write_report,
)
from .simulate import (
    BootstrapInnovations,
    DgpSpec,
    GaussianInnovations,
    SignalSpec,
    monte_carlo,
)
from .testing import TestOptions, mv_iid_test, tn_spectrum, tn_test

DEFAULT_ALPHAS = (0.1, 0.05, 0.01)


def _add_input_flags(sub):
    sub.add_argument("--input", required=True, help="input CSV path")
    sub.add_argument(
        "--basis-size",
        type=int,
        default=None,
        help="treat input as a grid CSV and fit this many Fourier basis functions "
        "(odd); omit for a pre-fitted coefficient CSV",
    )
    sub.add_argument(
        "--sqrt-transform",
        action="store_true",
        help="apply an element-wise square root to grid values before fitting "
        "(requires --basis-size)",
    )


def _add_test_flags(sub):
    sub.add_argument("--noise-model", choices=("far1", "iid"), default="far1")
    sub.add_argument("--var-threshold", type=float, default=0.99,
                     help="cumulative variance share for the operator estimate")
    sub.add_argument("--an-threshold", type=float, default=0.01,
                     help="eigenvalue-gap threshold for the centering truncation")


def _add_output_flags(sub):
    sub.add_argument("--output", default=None, help="output path (default: stdout)")
    sub.add_argument("--format", choices=("json", "csv"), default="json")


def _load_series(args) -> np.ndarray:
    if args.basis_size is None:
        if args.sqrt_transform:
            raise ValueError("--sqrt-transform requires --basis-size (grid input)")
        return read_coef_csv(args.input)
    grid_series = read_grid_csv(args.input)
    values = grid_series.values
    if args.sqrt_transform:
        if values.min() < 0:
            raise ValueError("--sqrt-transform needs nonnegative grid values")
        grid_series = GridSeries(values=np.sqrt(values), grid=grid_series.grid)
    return fit_basis(grid_series, BasisSpec(size=args.basis_size))


def _test_options(args, alpha: float) -> TestOptions:
    return TestOptions(
        variance_threshold=args.var_threshold,
        a_n_threshold=args.an_threshold,
        alpha=alpha,
        noise_model=args.noise_model,
    )


def _alphas(args, fallback=DEFAULT_ALPHAS) -> list:
    return list(args.alpha) if args.alpha else list(fallback)


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_test(args) -> int:
    series = _load_series(args)
    report = tn_test(series, _test_options(args, _alphas(args, (0.05,))[0]))
    if args.output is None:
        sys.stdout.write(json.dumps(report.as_dict(), indent=2) + "\n")
    else:
        write_report(report, args.output, format=args.format)
    return 0


def cmd_spectrum(args) -> int:
    series = _load_series(args)
    alphas = _alphas(args)
    rows = tn_spectrum(series, _test_options(args, alphas[0]))
    criticals = [gumbel_quantile(1.0 - a) for a in alphas]
    if args.format == "csv":
        header = "j,omega,t_n_j," + ",".join(f"crit_{a:g}" for a in alphas)
        lines = [header]
        crit_cells = ",".join(f"{c:.17g}" for c in criticals)
        for j, omega, value in rows:
            lines.append(f"{j},{omega:.17g},{value:.17g},{crit_cells}")
        _emit("\n".join(lines) + "\n", args.output)
    else:
        payload = {
            "rows": [{"j": j, "omega": w, "t_n_j": v} for j, w, v in rows],
            "critical_values": {str(a): c for a, c in zip(alphas, criticals)},
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


def _parse_floats(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_simulate(args) -> int:
    rho_diag = _parse_floats(args.rho_diag)
    if args.pool is not None:
        innovations = BootstrapInnovations(read_coef_csv(args.pool))
        p = innovations.dim
        if len(rho_diag) == 1:
            rho_diag = rho_diag * p
    else:
        p = len(rho_diag)
        if args.eigen_decay <= 0 or args.eigen_decay >= 1:
            raise ValueError("--eigen-decay must lie strictly in (0, 1)")
        innovations = GaussianInnovations(
            tuple(args.eigen_decay ** k for k in range(1, p + 1))
        )
    if len(rho_diag) != p:
        raise ValueError(
            f"--rho-diag lists {len(rho_diag)} entries but the dimension is {p}"
        )
    signal = None
    if args.amplitude > 0:
        if (args.period is None) == (args.poisson_lambda is None):
            raise ValueError("give exactly one of --period or --poisson-lambda")
        signal = SignalSpec(
            amplitude=args.amplitude,
            period=args.period,
            poisson_lambda=args.poisson_lambda,
        )
    dgp = DgpSpec(
        n=args.n,
        rho=np.diag(rho_diag),
        innovations=innovations,
        signal=signal,
        seed=args.seed,
    )
    alphas = _alphas(args)
    result = monte_carlo(dgp, _test_options(args, alphas[0]), args.reps, alphas)
    if args.output is None:
        sys.stdout.write(json.dumps(result.as_dict(), indent=2) + "\n")
    else:
        write_report(result, args.output, format=args.format)
    return 0


def cmd_mvtest(args) -> int:
    series = _load_series(args)
    report = mv_iid_test(series, alpha=_alphas(args, (0.05,))[0])
    if args.output is None:
        sys.stdout.write(json.dumps(report.as_dict(), indent=2) + "\n")
    else:
        write_report(report, args.output, format=args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fperiod",
        description="Detect periodic signals of unknown period in functional "
        "and multivariate time series.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    test = commands.add_parser("test", help="run the periodicity test on a series")
    _add_input_flags(test)
    _add_test_flags(test)
    _add_output_flags(test)
    test.add_argument("--alpha", type=float, action="append", default=None,
                      help="significance level (default 0.05)")
    test.set_defaults(func=cmd_test)

    spectrum = commands.add_parser(
        "spectrum", help="emit per-frequency statistics with critical values"
    )
    _add_input_flags(spectrum)
    _add_test_flags(spectrum)
    _add_output_flags(spectrum)
    spectrum.add_argument("--alpha", type=float, action="append", default=None,
                          help="critical-value level; repeatable (default 0.1 0.05 0.01)")
    spectrum.set_defaults(func=cmd_spectrum)

    simulate = commands.add_parser(
        "simulate", help="estimate rejection rates on a synthetic process"
    )
    simulate.add_argument("--n", type=int, required=True, help="series length")
    simulate.add_argument("--reps", type=int, default=2000, help="replications")
    simulate.add_argument("--seed", type=int, default=0, help="master seed")
    simulate.add_argument(
        "--rho-diag", default="0.5",
        help="comma-separated diagonal of the autoregression operator; "
        "its length sets the dimension unless --pool is given",
    )
    simulate.add_argument(
        "--eigen-decay", type=float, default=0.5,
        help="innovation covariance eigenvalues decay^k, k = 1..dim",
    )
    simulate.add_argument("--pool", default=None,
                          help="coefficient CSV to bootstrap innovations from")
    simulate.add_argument("--amplitude", type=float, default=0.0,
                          help="signal amplitude (0 = null hypothesis)")
    simulate.add_argument("--period", type=int, default=None, help="fixed signal period")
    simulate.add_argument("--poisson-lambda", type=float, default=None,
                          help="draw the period as 2 + Poisson(lambda) per replication")
    simulate.add_argument("--alpha", type=float, action="append", default=None,
                          help="significance level; repeatable (default 0.1 0.05 0.01)")
    _add_test_flags(simulate)
    _add_output_flags(simulate)
    simulate.set_defaults(func=cmd_simulate)

    mvtest = commands.add_parser(
        "mvtest", help="whitened multivariate test for iid observations"
    )
    _add_input_flags(mvtest)
    _add_output_flags(mvtest)
    mvtest.add_argument("--alpha", type=float, action="append", default=None,
                        help="significance level (default 0.05)")
    mvtest.set_defaults(func=cmd_mvtest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DegeneracyError as exc:
        print(f"fperiod: numerical degeneracy: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"fperiod: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
