"""``cvteleport`` command line.

Exit codes: 0 on success, 2 for configuration or I/O problems, 3 for
compute or convergence failures (including a failing ``verify``).
"""

import argparse
import csv
import io
import json
import logging
import sys

from ..channel import ChannelParams
from ..errors import ComputeError, ConfigError
from ..fidelity import fidelity_beta_independent
from ..moments import output_moments, sigma
from ..optimize import delta_opt_fidelity, delta_opt_variance, delta_subopt
from ..states import InputState, ResourceKind, preset_resource
from ..units import db_to_natural
from ..verification import run_all
from .scenario import load_scenario
from .sweep import emit, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

log = logging.getLogger("cvteleport")


def _channel_args(p):
    p.add_argument("--r-db", type=float, default=10.0, help="resource squeezing in dB")
    p.add_argument("--s-db", type=float, default=5.0, help="input squeezing in dB")
    p.add_argument("--s-bar-db", type=float, default=5.0, help="representative input squeezing for the sub-optimal angle")
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--n-th", type=float, default=0.0)
    p.add_argument("--R2", type=float, default=0.0, help="detector reflectivity R^2")


def _output_args(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="cvteleport", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a scenario file")
    run.add_argument("scenario_file", nargs="?", help="scenario TOML file")
    run.add_argument("--scenario", dest="scenario_opt", help="scenario TOML file")
    run.add_argument("--jobs", type=int, default=1)
    _output_args(run)

    cmp_ = sub.add_parser("compare-resources", help="fidelity and excess noise for every resource")
    _channel_args(cmp_)
    _output_args(cmp_)

    ang = sub.add_parser("optimal-angles", help="closed-form optimal mixing angles")
    _channel_args(ang)
    _output_args(ang)

    ver = sub.add_parser("verify", help="run the oracle-equivalence checks")
    ver.add_argument("--tolerance", type=float, default=None, help="override every check's tolerance")
    return parser


def _channel(args):
    if not (0.0 <= args.R2 < 1.0):
        raise ConfigError(f"--R2 must lie in [0, 1), got {args.R2}")
    if args.tau < 0 or args.n_th < 0 or args.r_db < 0 or args.s_db < 0 or args.s_bar_db < 0:
        raise ConfigError("squeezing levels, --tau and --n-th must be >= 0")
    return ChannelParams.from_loss(R2=args.R2, tau=args.tau, n_th=args.n_th)


def _table_text(header, rows, fmt):
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None


def cmd_run(args):
    path = args.scenario_opt or args.scenario_file
    if path is None:
        raise ConfigError("run needs a scenario file")
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    scenario = load_scenario(path)
    log.info("running %s: %d points", path, scenario.sweep.points)
    result = run_scenario(scenario, jobs=args.jobs)
    _write(emit(result, args.format), args.out)


def cmd_compare(args):
    params = _channel(args)
    r, s = db_to_natural(args.r_db), db_to_natural(args.s_db)
    state = InputState(s=s)
    sb = preset_resource(ResourceKind.SB, r)
    resources = [
        ("TwB", preset_resource(ResourceKind.TWB, r)),
        ("PAS", preset_resource(ResourceKind.PAS, r)),
        ("PSS", preset_resource(ResourceKind.PSS, r)),
        ("SB(subopt)", sb.with_delta(delta_subopt(r, params, s_bar=db_to_natural(args.s_bar_db)))),
        ("SB(opt)", sb.with_delta(delta_opt_fidelity(s, r, params))),
        ("SB(optvar)", sb.with_delta(delta_opt_variance(r, params.tau))),
    ]
    header = ["resource", "delta", "fidelity", "sigma", "var_x", "var_p"]
    rows = []
    for label, res in resources:
        m = output_moments(state, res, params)
        rows.append([label, res.delta, fidelity_beta_independent(s, res, params), sigma(res, params), m.var_x, m.var_p])
    _write(_table_text(header, rows, args.format), args.out)


def cmd_angles(args):
    params = _channel(args)
    r, s = db_to_natural(args.r_db), db_to_natural(args.s_db)
    header = ["r_db", "s_db", "s_bar_db", "delta_opt", "delta_subopt", "delta_optvar"]
    row = [
        args.r_db,
        args.s_db,
        args.s_bar_db,
        delta_opt_fidelity(s, r, params),
        delta_subopt(r, params, s_bar=db_to_natural(args.s_bar_db)),
        delta_opt_variance(r, params.tau),
    ]
    _write(_table_text(header, [row], args.format), args.out)


def cmd_verify(args):
    results = run_all(tolerance=args.tolerance)
    width = max(len(c.name) for c in results)
    print(f"{'check':<{width}}  {'points':>6}  {'max error':>10}  {'tolerance':>9}  result")
    for c in results:
        status = "PASS" if c.passed else "FAIL"
        print(f"{c.name:<{width}}  {c.points:>6}  {c.max_error:>10.3e}  {c.tolerance:>9.1e}  {status}")
    return EXIT_OK if all(c.passed for c in results) else EXIT_COMPUTE


COMMANDS = {
    "run": cmd_run,
    "compare-resources": cmd_compare,
    "optimal-angles": cmd_angles,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args) or EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ComputeError as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, ArithmeticError) as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
