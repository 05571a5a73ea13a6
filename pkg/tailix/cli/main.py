import argparse
import sys
import numpy as np
import pandas as pd
from tailix import __version__
from tailix._errors import TailixError, ParseError, PositivityError, DegenerateEstimateError, DegenerateTuningError, \
    QuadratureError, InvalidParametersError
from tailix.distributions import make_hall
from tailix.estimators import hill, pickands, moment, devries, dpr, gdpr, qi
from tailix.estimators.block_maxima import KERNELS
from tailix.theory import DEGENERATE, is_degenerate, SecondOrderParams, CLASSICAL_METHODS, dpr_asymptotics, \
    classical_asymptotics, rmmse, dpr_chi, QuadratureSpec, bias_curve
from tailix.simulation import METHODS, ExperimentConfig, run_experiment
from tailix.cli.regions import PLANES, COMPARISONS, DEFAULT_RANGES, DEFAULT_STEPS, DEFAULT_MAX_BETA_RATIO, \
    compute_region_grid
from tailix.utils.io import read_sample_file, write_csv, format_tuning

"""
Constants
"""
EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 4
EXIT_QUADRATURE = 5
_ORDER_STATISTIC_METHODS = ("hill", "pickands", "moment", "devries")
_ESTIMATORS = {"hill": hill, "pickands": pickands, "moment": moment, "devries": devries, "dpr": dpr, "gdpr": gdpr,
               "qi": qi}


class _ArgumentParser(argparse.ArgumentParser):
    """
    Argument parser that exits with code 4 on invalid flags.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "{0}: error: {1}\n".format(self.prog, message))


def _int_list(text: str) -> list:
    try:
        values = [int(value) for value in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("'{0}' is not a comma separated list of integers".format(text))
    return values


def _format_value(value) -> str:
    if value is None:
        return "undefined"
    if is_degenerate(value):
        return str(DEGENERATE)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "{0:.17g}".format(value)


def _print_key_values(pairs: list) -> None:
    for key, value in pairs:
        print("{0}: {1}".format(key, _format_value(value)))


def _tuning_list(args: argparse.Namespace) -> list:
    """
    The estimator keyword arguments for every requested tuning value.
    """
    if args.method in _ORDER_STATISTIC_METHODS:
        if args.k is None:
            raise InvalidParametersError("--k is required for {0}".format(args.method))
        return [{"k": k} for k in args.k]
    if args.m is None:
        raise InvalidParametersError("--m is required for {0}".format(args.method))
    if args.method == "gdpr":
        return [{"m": m, "kernel": args.kernel, "r": args.r} for m in args.m]
    if args.method == "qi":
        return [{"m": m, "s_top": args.s} for m in args.m]
    return [{"m": m} for m in args.m]


def cmd_estimate(args: argparse.Namespace) -> int:
    sample = read_sample_file(args.input)
    rows = []
    for tuning in _tuning_list(args):
        result = _ESTIMATORS[args.method](sample, **tuning)
        rows.append({"method": result.method, "tuning": format_tuning(result.tuning), "native": result.native,
                     "alpha_hat": result.alpha_hat, "gamma_hat": result.gamma_hat, "p_hat": result.p_hat})
    table = pd.DataFrame(rows, columns=["method", "tuning", "native", "alpha_hat", "gamma_hat", "p_hat"])
    for column in ["native", "alpha_hat", "gamma_hat", "p_hat"]:
        table[column] = table[column].astype(np.float64)
    write_csv(table, sys.stdout)
    return EXIT_OK


def cmd_theory(args: argparse.Namespace) -> int:
    params = SecondOrderParams(args.alpha, args.beta, args.c1, args.c2)
    asymptotics = dpr_asymptotics(params, args.n)
    _print_key_values([("zeta", asymptotics.zeta), ("chi", asymptotics.chi), ("sigma2", asymptotics.sigma2),
                       ("mu", asymptotics.mu), ("m_opt", asymptotics.m_opt_int),
                       ("m_opt_real", asymptotics.m_opt_real), ("amse", asymptotics.amse)])
    for j in CLASSICAL_METHODS:
        classical = classical_asymptotics(j, params, args.n)
        ratio = rmmse(j, args.alpha, args.beta)
        _print_key_values([("D_{0}".format(j), classical.d_j), ("sigma_{0}2".format(j), classical.sigma_j2),
                           ("k_opt_{0}".format(j), classical.k_opt), ("amse_p_{0}".format(j), classical.amse_p),
                           ("mu_{0}".format(j), classical.mu), ("rmmse_{0}".format(j), ratio)])
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    distribution = make_hall(args.c1, args.c2, args.alpha, args.beta)
    tuning = args.k if args.k is not None else (args.m if args.m is not None else "optimal")
    cfg = ExperimentConfig(distribution, args.n, args.method, tuning, args.replicates, args.seed, scale=args.scale,
                           kernel=args.kernel, r=args.r, s_top=args.s, resolution=args.resolution,
                           clt_mean=args.clt_mean, n_jobs=args.n_jobs, debug=args.debug)
    report = run_experiment(cfg)
    if args.out is not None:
        with open(args.out, "w", newline="") as f:
            f.write(report.to_json())
    print(report.summary())
    if report.n_valid == 0:
        print("All {0} replicates are degenerate".format(report.n_degenerate), file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_regions(args: argparse.Namespace) -> int:
    default_x_range, default_y_range = DEFAULT_RANGES[args.plane]
    x_range = (default_x_range[0] if args.x_min is None else args.x_min,
               default_x_range[1] if args.x_max is None else args.x_max)
    y_range = (default_y_range[0] if args.y_min is None else args.y_min,
               default_y_range[1] if args.y_max is None else args.y_max)
    x_steps = args.steps if args.x_steps is None else args.x_steps
    y_steps = args.steps if args.y_steps is None else args.y_steps
    grid = compute_region_grid(args.plane, x_range, y_range, x_steps, y_steps, versus=args.versus,
                               max_beta_ratio=args.max_beta_ratio, n_jobs=args.n_jobs, debug=args.debug)
    grid.write_csv(args.out)
    if args.pgm is not None:
        grid.write_pgm(args.pgm)
    print(" ".join("{0}={1}".format(label, count) for label, count in grid.counts().items()))
    return EXIT_OK


def cmd_bias_curve(args: argparse.Namespace) -> int:
    distribution = make_hall(args.c1, args.c2, args.alpha, args.beta)
    quadrature = QuadratureSpec(args.rel_tol, args.abs_tol, args.max_subdivisions)
    curve = bias_curve(distribution, args.m_list, quadrature, n_jobs=args.n_jobs)
    # No second order term, no leading bias
    chi = 0. if distribution.is_pareto else dpr_chi(SecondOrderParams.from_distribution(distribution))
    comment_lines = ["chi={0}".format(_format_value(chi))]
    if args.out is None:
        write_csv(curve, sys.stdout, comment_lines)
    else:
        write_csv(curve, args.out, comment_lines)
    return EXIT_OK


def _add_tail_arguments(parser: argparse.ArgumentParser, beta_default: float = None, c2_default: float = 0.) -> None:
    parser.add_argument("--c1", type=float, default=1., help="First tail constant C1 > 0")
    parser.add_argument("--c2", type=float, default=c2_default, help="Second tail constant C2")
    parser.add_argument("--alpha", type=float, required=True, help="Tail index alpha > 0")
    if beta_default is None:
        parser.add_argument("--beta", type=float, required=True, help="Second-order exponent beta > alpha")
    else:
        parser.add_argument("--beta", type=float, default=beta_default,
                            help="Second-order exponent beta > alpha (default: inf, pure Pareto)")


def build_parser() -> argparse.ArgumentParser:
    """
    Create the argument parser with the sub-commands estimate, theory, simulate, regions and bias-curve.

    Returns
    -------
    parser : argparse.ArgumentParser
        The parser
    """
    parser = _ArgumentParser(prog="tailix", description="Tail index estimation, asymptotic theory and simulation "
                                                        "(estimate | theory | simulate | regions | bias-curve)")
    parser.add_argument("--version", action="version", version="tailix " + __version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    pe = sub.add_parser("estimate", help="Estimate the tail index of a sample file")
    pe.add_argument("input", type=str, help="Text file with one positive decimal per line, '#' starts a comment")
    pe.add_argument("--method", choices=list(_ESTIMATORS.keys()), required=True)
    pe.add_argument("--k", type=_int_list, default=None, help="Number(s) of upper order statistics, e.g. 10,20")
    pe.add_argument("--m", type=_int_list, default=None, help="Block size(s), e.g. 2,5")
    pe.add_argument("--s", type=int, default=1, help="Top values per block of qi")
    pe.add_argument("--r", type=float, default=1., help="Exponent of the power kernels of gdpr")
    pe.add_argument("--kernel", choices=list(KERNELS), default="power")
    pe.set_defaults(func=cmd_estimate)

    pt = sub.add_parser("theory", help="Asymptotic constants, optimal tunings and RMMSE values")
    _add_tail_arguments(pt, c2_default=1.)
    pt.add_argument("--n", type=int, required=True, help="Sample size N")
    pt.set_defaults(func=cmd_theory)

    ps = sub.add_parser("simulate", help="Monte Carlo experiment, writes a tailix-report-v1 JSON document")
    _add_tail_arguments(ps, np.inf)
    ps.add_argument("--n", type=int, required=True, help="Sample size N of each replicate")
    ps.add_argument("--method", choices=list(METHODS), required=True)
    ps.add_argument("--k", type=int, default=None, help="Number of upper order statistics (default: optimal)")
    ps.add_argument("--m", type=int, default=None, help="Block size (default: optimal)")
    ps.add_argument("--s", type=int, default=1)
    ps.add_argument("--r", type=float, default=1.)
    ps.add_argument("--kernel", choices=list(KERNELS), default="power")
    ps.add_argument("--replicates", type=int, default=1)
    ps.add_argument("--seed", type=int, required=True, help="Base seed of the replicates")
    ps.add_argument("--scale", choices=["native", "p"], default="native")
    ps.add_argument("--resolution", type=float, default=None, help="Round simulated values up to this grid")
    ps.add_argument("--clt-mean", type=float, default=None)
    ps.add_argument("--n-jobs", type=int, default=1)
    ps.add_argument("--out", type=str, default=None, help="Path of the JSON report")
    ps.add_argument("--debug", action="store_true")
    ps.set_defaults(func=cmd_simulate)

    pr = sub.add_parser("regions", help="Domination regions of the dpr, Pickands and moment estimators")
    pr.add_argument("--plane", choices=list(PLANES), default="alpha-beta")
    pr.add_argument("--versus", choices=list(COMPARISONS), default="both",
                    help="Competitors of the block ratio estimator used for the labels")
    pr.add_argument("--max-beta-ratio", type=float, default=DEFAULT_MAX_BETA_RATIO,
                    help="alpha-beta plane: cells with beta > ratio * alpha are invalid (inf: whole rectangle)")
    pr.add_argument("--x-min", type=float, default=None)
    pr.add_argument("--x-max", type=float, default=None)
    pr.add_argument("--y-min", type=float, default=None)
    pr.add_argument("--y-max", type=float, default=None)
    pr.add_argument("--steps", type=int, default=DEFAULT_STEPS, help="Steps per axis")
    pr.add_argument("--x-steps", type=int, default=None)
    pr.add_argument("--y-steps", type=int, default=None)
    pr.add_argument("--out", type=str, required=True, help="Path of the CSV grid")
    pr.add_argument("--pgm", type=str, default=None, help="Path of the PGM (P5) label raster")
    pr.add_argument("--n-jobs", type=int, default=1)
    pr.add_argument("--debug", action="store_true")
    pr.set_defaults(func=cmd_regions)

    pb = sub.add_parser("bias-curve", help="Exact bias of the block ratio estimator by adaptive quadrature")
    _add_tail_arguments(pb, np.inf)
    pb.add_argument("--m-list", type=_int_list, required=True, help="Block sizes, e.g. 10,100,1000")
    pb.add_argument("--rel-tol", type=float, default=1e-10)
    pb.add_argument("--abs-tol", type=float, default=1e-14)
    pb.add_argument("--max-subdivisions", type=int, default=100000)
    pb.add_argument("--n-jobs", type=int, default=1)
    pb.add_argument("--out", type=str, default=None, help="Path of the CSV file (default: standard output)")
    pb.set_defaults(func=cmd_bias_curve)
    return parser


def main(argv: list = None) -> int:
    """
    Entry point of the tailix command.
    Exit codes: 0 success, 2 input parse error, 3 degenerate estimate or tuning, 4 invalid flags or parameters,
    5 quadrature failure.

    Parameters
    ----------
    argv : list
        The arguments. If None, sys.argv is used (default: None)

    Returns
    -------
    code : int
        The exit code
    """
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, PositivityError) as e:
        print("error: {0}".format(e), file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print("error: {0}".format(e), file=sys.stderr)
        return EXIT_PARSE
    except (DegenerateEstimateError, DegenerateTuningError) as e:
        print("degenerate: {0}".format(e), file=sys.stderr)
        return EXIT_DEGENERATE
    except QuadratureError as e:
        print("quadrature failure: {0}".format(e), file=sys.stderr)
        return EXIT_QUADRATURE
    except TailixError as e:
        print("error: {0}".format(e), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
