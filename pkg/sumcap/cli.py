"""
CLI - Command-line front end

    python -m sumcap bounds --p-db 10 --h 0.25
    python -m sumcap sweep --p-db 10 --h-from 0 --h-to 1 --h-step 0.01 --out sweep.csv
    python -m sumcap genie --p 10 --h 0.25
    python -m sumcap verify --seed 7 --trials 1000
    python -m sumcap sample --p 10 --h 0.25 --n 1000 --seed 1 --out batch.csv

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

import argparse
import csv
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from sumcap import bounds, config, geometry, montecarlo, regime, verify
from sumcap.channel import ChannelParams, db_to_linear
from sumcap.errors import SumCapError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

BOUND_COLUMNS = (
    "tin_lower",
    "ortho_lower",
    "onebit_upper",
    "kramer_upper",
    "tangent_upper",
    "exact_capacity",
    "regime",
    "genie_upper",
)
SYMMETRIC_KEYS = ("h", "p")
ASYMMETRIC_KEYS = ("h12", "h21", "p1", "p2")


class UsageError(Exception):
    """Arguments parse but do not describe a valid request."""


# --- Formatting ---

def format_report(value):
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.{config.REPORT_SIGNIFICANT_DIGITS}g}"
    return str(value)


def format_csv(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{config.CSV_SIGNIFICANT_DIGITS}g}"
    return str(value)


def _print_aligned(pairs, out):
    width = max(len(key) for key, _ in pairs)
    for key, value in pairs:
        out.write(f"{key:<{width}}  {format_report(value)}\n")


# --- Argument Handling ---

def _add_power_arguments(parser):
    power = parser.add_mutually_exclusive_group()
    power.add_argument("--p", type=float, help="common transmit power (linear)")
    power.add_argument("--p-db", type=float, dest="p_db", help="common transmit power in dB")
    parser.add_argument("--p1", type=float, help="transmit power of user 1 (linear)")
    parser.add_argument("--p2", type=float, help="transmit power of user 2 (linear)")


def _add_channel_arguments(parser):
    _add_power_arguments(parser)
    parser.add_argument("--h", type=float, help="common cross-gain of a symmetric channel")
    parser.add_argument("--h12", type=float, help="cross-gain of user 2 into receiver 1")
    parser.add_argument("--h21", type=float, help="cross-gain of user 1 into receiver 2")


def _common_power(args):
    if args.p is not None:
        return args.p
    if args.p_db is not None:
        return db_to_linear(args.p_db)
    return None


def _user_powers(args):
    """(p1, p2) from --p/--p-db or from --p1 and --p2."""
    common = _common_power(args)
    split = (args.p1, args.p2)
    if common is not None:
        if any(value is not None for value in split):
            raise UsageError("give either --p/--p-db or --p1 and --p2, not both")
        return common, common
    if None in split:
        raise UsageError("a power is required: --p, --p-db, or both --p1 and --p2")
    return split


def channel_from_args(args):
    """
    Build ChannelParams from parsed flags. Symmetric form: --p/--p-db with --h.
    Asymmetric form: powers with --h12 and --h21.
    """
    p1, p2 = _user_powers(args)
    gains = (args.h12, args.h21)
    if args.h is not None:
        if any(value is not None for value in gains):
            raise UsageError("give either --h or --h12 and --h21, not both")
        return ChannelParams.asymmetric(p1, p2, args.h, args.h)
    if None in gains:
        raise UsageError("a gain is required: --h, or both --h12 and --h21")
    return ChannelParams.asymmetric(p1, p2, *gains)


def h_grid(h_from, h_to, h_step):
    """
    Grid h_from, h_from + step, ... up to h_to. A step larger than the range
    yields the single point h_from.
    """
    if not all(math.isfinite(v) for v in (h_from, h_to, h_step)):
        raise UsageError("grid bounds and step must be finite")
    if h_step <= 0:
        raise UsageError(f"--h-step must be positive, got {h_step!r}")
    if h_to < h_from:
        raise UsageError(f"inverted grid: --h-to {h_to!r} < --h-from {h_from!r}")
    count = int(math.floor((h_to - h_from) / h_step + 1e-9)) + 1
    return [round(h_from + k * h_step, 12) for k in range(count)]


# --- Rows ---

def sweep_row(job):
    """One SweepRow as an ordered dict; job is (p1, p2, h12, h21, asymmetric)."""
    p1, p2, h12, h21, asymmetric = job
    params = ChannelParams(p1, p2, h12, h21)
    values = bounds.all_bounds(params).as_dict()
    if asymmetric:
        row = {"h12": h12, "h21": h21, "p1": p1, "p2": p2}
    else:
        row = {"h": h12, "p": p1}
    row.update((name, values[name]) for name in BOUND_COLUMNS)
    return row


def _sweep_jobs(args):
    p1, p2 = _user_powers(args)
    grid = h_grid(args.h_from, args.h_to, args.h_step)
    asymmetric = args.h21 is not None or p1 != p2
    if asymmetric:
        h21 = args.h21
        if h21 is None:
            raise UsageError("asymmetric sweeps need --h21")
        return [(p1, p2, h, h21, True) for h in grid], asymmetric
    return [(p1, p2, h, h, False) for h in grid], asymmetric


def compute_rows(jobs, workers=1):
    """Rows in grid order, computed in a process pool when workers > 1."""
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(sweep_row, jobs))
    return [sweep_row(job) for job in jobs]


def write_csv(rows, columns, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_csv(row[name]) for name in columns])


# --- Commands ---

def cmd_bounds(args, out):
    params = channel_from_args(args)
    bound_set = bounds.all_bounds(params)
    report = {"p1": params.p1, "p2": params.p2, "h12": params.h12, "h21": params.h21}
    report.update(bound_set.as_dict())
    if args.format == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        _print_aligned(list(report.items()), out)
    return EXIT_OK


def cmd_sweep(args, out):
    if args.jobs < 1:
        raise UsageError(f"--jobs must be at least 1, got {args.jobs}")
    jobs, asymmetric = _sweep_jobs(args)
    columns = (ASYMMETRIC_KEYS if asymmetric else SYMMETRIC_KEYS) + BOUND_COLUMNS
    rows = compute_rows(jobs, workers=args.jobs)
    logger.info("computed %d sweep rows", len(rows))

    target = open(args.out, "w", encoding="utf-8", newline="") if args.out else out
    try:
        if args.format == "json":
            json.dump(rows, target, indent=2)
            target.write("\n")
        else:
            write_csv(rows, columns, target)
    finally:
        if args.out:
            target.close()
    return EXIT_OK


def _genie_report(params):
    label = regime.classify(params)
    report = {"regime": label.kind.value, "condition_value": label.condition_value, "threshold": label.threshold}

    if regime.needs_no_genie(params):
        report["certificate"] = "trivial regime, no genie needed"
        report["tin_sum_rate"] = bounds.tin_sum_rate(params)
        return report

    genie = regime.construct_genie(params)
    if genie is None:
        report["certificate"] = "no certificate"
        if params.symmetric and params.h != 0.0:
            tangent = geometry.tangent_bound(params)
            report.update(
                tangent_upper=tangent.rate,
                tangent_eta=tangent.point.eta,
                tangent_theta=tangent.point.theta,
                tangent_slope=tangent.slope,
                tangent_multiple_maxima=tangent.multiple,
            )
        return report

    report["certificate"] = "useful and smart genie"
    if genie.is_symmetric:
        report.update(eta=genie.eta1, rho=genie.rho1)
    else:
        report.update(eta1=genie.eta1, rho1=genie.rho1, eta2=genie.eta2, rho2=genie.rho2)
    if params.symmetric:
        polar = geometry.to_polar(genie, params)
        report.update(polar_eta=polar.eta, polar_theta=polar.theta)
    useful = regime.useful_residuals(genie, params)
    smart = regime.smart_residuals(genie, params)
    report.update(
        useful_residual_1=useful[0],
        useful_residual_2=useful[1],
        smart_residual_1=smart[0],
        smart_residual_2=smart[1],
        genie_aided_sum_rate=bounds.certified_genie_upper(params),
        tin_sum_rate=bounds.tin_sum_rate(params),
    )
    return report


def cmd_genie(args, out):
    report = _genie_report(channel_from_args(args))
    if args.format == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        _print_aligned(list(report.items()), out)
    return EXIT_OK


def cmd_verify(args, out):
    if args.trials < 1 or args.mc_samples < 1:
        raise UsageError("--trials and --mc-samples must be positive")
    results = verify.run_all(seed=args.seed, trials=args.trials, mc_samples=args.mc_samples)

    width = max(len(result.name) for result in results)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        out.write(f"{result.name:<{width}}  {status}  checked={result.checked} "
                  f"failures={result.failures} worst_residual={result.worst_residual:.3g}\n")
    failed = [result for result in results if not result.passed]
    for result in failed:
        out.write(f"first failure in {result.name}: {result.first_failure}\n")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def cmd_sample(args, out):
    if args.n < 1:
        raise UsageError(f"--n must be at least 1, got {args.n}")
    params = channel_from_args(args)
    genie = None if args.no_genie else regime.construct_genie(params)
    batch = montecarlo.sample(params, genie, n=args.n, seed=args.seed)
    batch.to_csv(args.out if args.out else out)
    return EXIT_OK


# --- Parser ---

def build_parser():
    verbosity = argparse.ArgumentParser(add_help=False)
    verbosity.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")

    parser = argparse.ArgumentParser(
        prog="sumcap",
        description="Sum-capacity bounds of the two-user Gaussian interference channel",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    bounds_cmd = commands.add_parser("bounds", parents=[verbosity], help="report every bound for one channel")
    _add_channel_arguments(bounds_cmd)
    bounds_cmd.add_argument("--format", choices=("text", "json"), default="text")
    bounds_cmd.set_defaults(handler=cmd_bounds)

    sweep_cmd = commands.add_parser("sweep", parents=[verbosity], help="bounds over a grid of cross-gains")
    _add_power_arguments(sweep_cmd)
    sweep_cmd.add_argument("--h-from", type=float, dest="h_from", required=True)
    sweep_cmd.add_argument("--h-to", type=float, dest="h_to", required=True)
    sweep_cmd.add_argument("--h-step", type=float, dest="h_step", required=True)
    sweep_cmd.add_argument("--h21", type=float, help="fixed h21; the grid then runs over h12")
    sweep_cmd.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep_cmd.add_argument("--out", help="write to this path instead of standard output")
    sweep_cmd.add_argument("--jobs", type=int, default=1, help="worker processes")
    sweep_cmd.set_defaults(handler=cmd_sweep)

    genie_cmd = commands.add_parser("genie", parents=[verbosity], help="certificate genie for one channel")
    _add_channel_arguments(genie_cmd)
    genie_cmd.add_argument("--format", choices=("text", "json"), default="text")
    genie_cmd.set_defaults(handler=cmd_genie)

    verify_cmd = commands.add_parser("verify", parents=[verbosity], help="run the self-verification suites")
    verify_cmd.add_argument("--seed", type=int, default=config.VERIFY_DEFAULTS["seed"])
    verify_cmd.add_argument("--trials", type=int, default=config.VERIFY_DEFAULTS["trials"])
    verify_cmd.add_argument("--mc-samples", type=int, dest="mc_samples", default=config.VERIFY_DEFAULTS["mc_samples"])
    verify_cmd.set_defaults(handler=cmd_verify)

    sample_cmd = commands.add_parser("sample", parents=[verbosity], help="dump a seeded sample batch as CSV")
    _add_channel_arguments(sample_cmd)
    sample_cmd.add_argument("--n", type=int, default=100_000)
    sample_cmd.add_argument("--seed", type=int, default=0)
    sample_cmd.add_argument("--no-genie", action="store_true", dest="no_genie", help="omit W and S columns")
    sample_cmd.add_argument("--out", help="write to this path instead of standard output")
    sample_cmd.set_defaults(handler=cmd_sample)

    return parser


def _configure_logging(verbose):
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    _configure_logging(args.verbose)
    try:
        return args.handler(args, out)
    except (UsageError, SumCapError) as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return EXIT_USAGE
