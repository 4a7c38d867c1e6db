"""Command-line front end: state input, subcommand dispatch, CSV/JSON output.

Exit codes: 0 success, 2 input or validation error, 3 optimizer
non-convergence.  All numeric output is deterministic for fixed flags.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import frames, qmat, scenarios
from .advantage import VERDICT_MARGIN, naqi_value
from .complementarity import bound_constant, maximize_sum_over_states
from .imaginarity import Measure, imag_measure
from .optimize import OptimizerConfig

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NONCONVERGED = 3


class InputError(Exception):
    pass


def read_state_json(path: str) -> np.ndarray:
    """Load a density matrix from {"dim": d, "re": [[..]], "im": [[..]]}."""
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read state file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path!r}: {exc}") from exc
    for key in ("dim", "re", "im"):
        if key not in payload:
            raise InputError(f"state file {path!r} is missing field {key!r}")
    dim = payload["dim"]
    re = np.asarray(payload["re"], dtype=float)
    im = np.asarray(payload["im"], dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise InputError(
            f"state file {path!r}: 're'/'im' must be {dim}x{dim} arrays, "
            f"got {re.shape} and {im.shape}"
        )
    try:
        return qmat.density_matrix(re + 1j * im)
    except ValueError as exc:
        raise InputError(f"state file {path!r}: {exc}") from exc


def write_state_json(path: str, rho: np.ndarray) -> None:
    rho = np.asarray(rho, dtype=complex)
    payload = {
        "dim": rho.shape[0],
        "re": rho.real.tolist(),
        "im": rho.imag.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _add_optimizer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", type=int, default=24, help="grid points per dimension")
    parser.add_argument("--refine-iters", type=int, default=200, help="simplex iteration budget")
    parser.add_argument("--refine-tol", type=float, default=1e-9, help="simplex diameter tolerance")
    parser.add_argument("--starts", type=int, default=8, help="multistart count")
    parser.add_argument("--seed", type=int, default=0, help="optimizer seed (reserved; the search is deterministic)")


def _add_common_flags(parser: argparse.ArgumentParser, state: bool = True) -> None:
    parser.add_argument("--measure", choices=[m.value for m in Measure], required=True,
                        help="imaginarity measure: l1 norm or relative entropy (r)")
    if state:
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--family", choices=sorted(scenarios.TWO_QUBIT_FAMILIES),
                           help="built-in two-qubit family")
        group.add_argument("--state-json", help="path to a JSON density matrix")
        parser.add_argument("--p", type=float, help="family mixing parameter")
    parser.add_argument("--mub-family", choices=["full", "paper"], default="full",
                        help="MUB search space: full rotation orbit or the "
                             "two-angle construction")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes for sweeps (default: NAQI_WORKERS or CPU count)")
    parser.add_argument("--output", help="write output to this file instead of stdout")


def _config_from(args) -> OptimizerConfig:
    try:
        return OptimizerConfig(
            grid_points_per_dim=args.grid,
            refine_iterations=args.refine_iters,
            refine_tolerance=args.refine_tol,
            multistart_count=args.starts,
            seed=args.seed,
        )
    except ValueError as exc:
        raise InputError(f"bad optimizer configuration: {exc}") from exc


def _workers_from(args) -> int:
    if getattr(args, "workers", None) is not None:
        if args.workers < 1:
            raise InputError("--workers must be at least 1")
        return args.workers
    env = os.environ.get("NAQI_WORKERS")
    if env is not None:
        try:
            value = int(env)
        except ValueError as exc:
            raise InputError(f"NAQI_WORKERS must be an integer, got {env!r}") from exc
        if value < 1:
            raise InputError("NAQI_WORKERS must be at least 1")
        return value
    return os.cpu_count() or 1


def _state_from(args) -> np.ndarray:
    if args.state_json is not None:
        rho = read_state_json(args.state_json)
        if rho.shape[0] != 4:
            raise InputError("this subcommand needs a two-qubit (4x4) state")
        return rho
    if args.p is None:
        raise InputError(f"--family {args.family} requires --p")
    try:
        return scenarios.build_state(args.family, p=args.p)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def cmd_bound(args) -> int:
    bc = bound_constant(args.measure)
    _emit(_json_dump({
        "measure": bc.measure.value,
        "value": bc.value,
        "maximizer": bc.maximizer.tolist(),
        "provenance": bc.provenance,
    }), args.output)
    return EXIT_OK


def cmd_measure(args) -> int:
    if args.state_json is not None:
        rho = read_state_json(args.state_json)
        if rho.shape[0] != 2:
            raise InputError("the measure subcommand needs a qubit (2x2) state")
    elif args.bloch is not None:
        try:
            rho = qmat.bloch_to_density(np.asarray(args.bloch, dtype=float))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        raise InputError("provide the state via --state-json or --bloch")
    triple = frames.mub_triple(
        _angle(args.theta1, args.degrees),
        _angle(args.phi1, args.degrees),
        _angle(args.chi, args.degrees),
    )
    per_basis = [imag_measure(args.measure, rho, basis) for basis in triple.bases]
    _emit(_json_dump({
        "measure": Measure(args.measure).value,
        "per_basis": per_basis,
        "sum": sum(per_basis),
        "bound": bound_constant(args.measure).value,
    }), args.output)
    return EXIT_OK


def cmd_naqi(args) -> int:
    rho = _state_from(args)
    result = naqi_value(
        rho, args.measure, _config_from(args), mub_family=args.mub_family
    )
    _emit(_json_dump(result.to_dict()), args.output)
    if not result.diagnostics.get("certified", False):
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.family is None:
        raise InputError("scan sweeps a family parameter; provide --family")
    if args.points < 2:
        raise InputError("--points must be at least 2")
    params = np.linspace(args.start, args.stop, args.points)
    records = scenarios.scan_family(
        args.family,
        params,
        args.measure,
        _config_from(args),
        mub_family=args.mub_family,
        workers=_workers_from(args),
    )
    if args.format == "csv":
        _emit(scenarios.scan_records_to_csv(records), args.output)
    else:
        _emit(_json_dump([
            {"param": r.param, "N": r.value, "witness": r.witness, "verdict": r.verdict}
            for r in records
        ]), args.output)
    return EXIT_OK


def cmd_threshold(args) -> int:
    if args.family is None:
        raise InputError("threshold sweeps a family parameter; provide --family")
    try:
        value = scenarios.find_naqi_threshold(
            args.family,
            args.measure,
            (args.bracket[0], args.bracket[1]),
            _config_from(args),
            mub_family=args.mub_family,
            tol=args.tol,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(_json_dump({
        "family": args.family,
        "measure": Measure(args.measure).value,
        "threshold": value,
        "bracket": list(args.bracket),
        "tol": args.tol,
    }), args.output)
    return EXIT_OK


def cmd_exclusion(args) -> int:
    config = _config_from(args)
    workers = _workers_from(args)
    if args.family == "alpha-beta":
        alphas = np.linspace(0.0, math.pi, args.alpha_points)
        betas = np.linspace(0.0, 2.0 * math.pi, args.beta_points)
        records = scenarios.exclusion_scan_two_angle(
            alphas, betas, args.measure, config,
            mub_family=args.mub_family, workers=workers,
            reverse_roles=args.reverse_roles,
        )
    else:
        thetas = np.linspace(0.0, 2.0 * math.pi, args.points)
        records = scenarios.exclusion_scan_one_angle(
            thetas, args.measure, config,
            mub_family=args.mub_family, workers=workers,
            reverse_roles=args.reverse_roles,
        )
    _emit(scenarios.exclusion_records_to_csv(records), args.output)
    return EXIT_OK


def cmd_selftest(args) -> int:
    margin = args.debug_verdict_margin if args.debug_verdict_margin is not None else VERDICT_MARGIN
    failures: list[str] = []
    sqrt5 = math.sqrt(5.0)

    def check(name: str, ok: bool, detail: str = "") -> None:
        status = "ok" if ok else "FAIL"
        print(f"[selftest] {name}: {status}{(' ' + detail) if detail else ''}")
        if not ok:
            failures.append(name)

    l1_bound = bound_constant(Measure.L1)
    check("l1 bound is sqrt(5)", abs(l1_bound.value - sqrt5) < 1e-12)
    rel_bound = bound_constant(Measure.RELATIVE_ENTROPY)
    check(
        "relative-entropy bound near 2.02685",
        abs(rel_bound.value - 2.02685) <= 5e-4,
        f"recomputed {rel_bound.value:.6f}",
    )

    for p, expect_naqi in ((0.2, False), (0.5, False), (0.8, True)):
        res = naqi_value(scenarios.werner(p), Measure.L1, verdict_margin=margin)
        check(f"werner l1 law at p={p}", abs(res.value - 3.0 * p) <= 1e-6,
              f"N={res.value:.9f}")
        check(f"werner l1 verdict at p={p}", res.verdict == expect_naqi)

    for p in (0.2, 0.35, 0.45):
        w_lo = naqi_value(scenarios.bell_mixture(p), Measure.L1, verdict_margin=margin)
        w_hi = naqi_value(scenarios.bell_mixture(1.0 - p), Measure.L1, verdict_margin=margin)
        check(
            f"bell-mixture symmetry at p={p}",
            abs(w_lo.witness - w_hi.witness) <= 1e-6,
            f"|dF|={abs(w_lo.witness - w_hi.witness):.2e}",
        )

    if failures:
        print(f"[selftest] {len(failures)} check(s) failed: {', '.join(failures)}")
        return 1
    print("[selftest] all checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="naqi",
        description="Qubit imaginarity complementarity bounds and the nonlocal "
                    "advantage of quantum imaginarity for two-qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("bound", help="print a complementarity bound constant")
    q.add_argument("--measure", choices=[m.value for m in Measure], required=True)
    q.add_argument("--output")
    q.set_defaults(fn=cmd_bound)

    q = sub.add_parser("measure", help="imaginarity of a qubit state over a MUB triple")
    q.add_argument("--measure", choices=[m.value for m in Measure], required=True)
    q.add_argument("--state-json")
    q.add_argument("--bloch", type=float, nargs=3, metavar=("NX", "NY", "NZ"))
    q.add_argument("--theta1", type=float, default=0.0, help="triple polar angle")
    q.add_argument("--phi1", type=float, default=0.0, help="triple azimuthal angle")
    q.add_argument("--chi", type=float, default=0.0, help="triple relative phase")
    q.add_argument("--degrees", action="store_true", help="interpret angles in degrees")
    q.add_argument("--output")
    q.set_defaults(fn=cmd_measure)

    q = sub.add_parser("naqi", help="maximized conditional imaginarity and NAQI verdict")
    _add_common_flags(q)
    _add_optimizer_flags(q)
    q.set_defaults(fn=cmd_naqi)

    q = sub.add_parser("scan", help="witness sweep over a family parameter grid")
    _add_common_flags(q)
    _add_optimizer_flags(q)
    q.add_argument("--start", type=float, default=0.0)
    q.add_argument("--stop", type=float, default=1.0)
    q.add_argument("--points", type=int, default=21)
    q.add_argument("--format", choices=["csv", "json"], default="csv")
    q.set_defaults(fn=cmd_scan)

    q = sub.add_parser("threshold", help="bisect the NAQI onset of a family")
    _add_common_flags(q)
    _add_optimizer_flags(q)
    q.add_argument("--bracket", type=float, nargs=2, default=(0.5, 1.0),
                   metavar=("LO", "HI"))
    q.add_argument("--tol", type=float, default=1e-5)
    q.set_defaults(fn=cmd_threshold)

    q = sub.add_parser("exclusion", help="three-qubit pairwise NAQI exclusion scan")
    q.add_argument("--family", choices=["alpha-beta", "theta"], required=True)
    q.add_argument("--measure", choices=[m.value for m in Measure], default="l1")
    q.add_argument("--alpha-points", type=int, default=40)
    q.add_argument("--beta-points", type=int, default=40)
    q.add_argument("--points", type=int, default=100, help="theta grid size")
    q.add_argument("--mub-family", choices=["full", "paper"], default="full")
    q.add_argument("--reverse-roles", action="store_true",
                   help="measure on the second party of each pair instead")
    q.add_argument("--workers", type=int, default=None)
    q.add_argument("--output")
    _add_optimizer_flags(q)
    q.set_defaults(fn=cmd_exclusion)

    q = sub.add_parser("selftest", help="fast end-to-end sanity checks")
    q.add_argument("--debug-verdict-margin", type=float, default=None,
                   help="override the NAQI verdict margin (debugging aid)")
    q.set_defaults(fn=cmd_selftest)

    return parser


def parse_and_dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
