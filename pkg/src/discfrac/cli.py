"""Command-line entry point: ``discfrac {kernel,apply,evolve,holder,schauder,selftest}``.

Exit codes: 0 success, 1 failed self-test, 2 usage or input error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import acceptance
from .errors import CrossCheckFailed, DiscFracError, QuadratureNotConverged, WindowTooSmall
from .fracops import OperatorSpec, frac_apply
from .grid import Extension
from .holder import HolderIndex, double_window_stability, holder_norm
from .kernel import injected_fault, kernel
from .schauder import FAMILIES_BY_NAME, TestFamily, run_sweep
from .semigroup import apply_semigroup
from .signals import dump_report, make_report, parse_signal, write_signal

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3

MODULES = ("kernel", "semigroup", "fracops", "holder", "schauder")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _h_value(text: str) -> float:
    # accept fractions such as 1/32
    try:
        if "/" in text:
            num, den = text.split("/")
            return float(num) / float(den)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad step {text!r}") from None


def _h_list(text: str) -> list[float]:
    return [_h_value(x) for x in text.split(",") if x.strip()]


def _extension(text: str) -> Extension:
    try:
        return Extension.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="tolerance (default 1e-10)")
    common.add_argument("--h", type=_h_value, default=argparse.SUPPRESS, help="mesh step (default 1)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")

    parser = argparse.ArgumentParser(prog="discfrac", description="Discrete fractional calculus on Z_h.")
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--h", type=_h_value, default=1.0)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", parents=[common], help="dump a kernel table as CSV")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--method", choices=["recurrence", "loggamma"], default="recurrence")
    p.add_argument("--out", default="-")

    p = sub.add_parser("apply", parents=[common], help="apply a fractional operator to a signal")
    p.add_argument("--order", type=float, required=True)
    p.add_argument("--side", choices=["right", "left"], default="right")
    p.add_argument("--input", required=True)
    p.add_argument("--extension", type=_extension, default=Extension.zero())
    p.add_argument("--method", choices=["series", "fft", "quadrature"], default="series")
    p.add_argument("--out", default="-")

    p = sub.add_parser("evolve", parents=[common], help="evolve a signal with the Poisson semigroup")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--side", choices=["right", "left"], default="right")
    p.add_argument("--input", required=True)
    p.add_argument("--extension", type=_extension, default=Extension.zero())
    p.add_argument("--out", default="-")

    p = sub.add_parser("holder", parents=[common], help="discrete Hölder norm report")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--extension", type=_extension, default=Extension.zero())
    p.add_argument("--report", default="-")

    p = sub.add_parser("schauder", parents=[common], help="Schauder ratio sweep")
    p.add_argument("--case", choices=["i", "ii", "iii", "iv"], required=True)
    p.add_argument("--alpha-list", type=_float_list, required=True)
    p.add_argument("--beta-list", type=_float_list, default=None)
    p.add_argument("--h-list", type=_h_list, default=[2.0**-i for i in range(6)])
    p.add_argument("--families", default=",".join(FAMILIES_BY_NAME))
    p.add_argument("--k", type=int, default=1, help="smoothness index for case iii")
    p.add_argument("--half-width", type=float, default=16.0)
    p.add_argument("--report", default="-")

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.add_argument("--filter", default=None, help=f"comma-separated modules out of {','.join(MODULES)}")
    p.add_argument("--inject-fault", choices=["kernel"], default=None, help="corrupt kernel tables")
    p.add_argument("--report", default=None)
    return parser


def _tolerances(args) -> dict:
    return {"tol": args.tol}


def _cmd_kernel(args) -> int:
    table = kernel(args.alpha, args.max_index, args.method)
    lines = ["n,lambda"] + [f"{n},{float(v)!r}" for n, v in enumerate(table.values)]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _read(args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        u, info = parse_signal(args.input, args.h, args.extension, return_info=True)
    if info.zero_filled:
        print(f"warning: zero-filled indices {list(info.zero_filled)}", file=sys.stderr)
    return u


def _cmd_apply(args) -> int:
    u = _read(args)
    v = frac_apply(u, OperatorSpec(args.order, args.side), args.method, args.tol)
    _emit(write_signal(v.restricted(u.grid.n_min, u.grid.n_max)), args.out)
    return EXIT_OK


def _cmd_evolve(args) -> int:
    u = _read(args)
    tol = min(args.tol, 1e-12)
    _emit(write_signal(apply_semigroup(u, args.t, args.side, tol)), args.out)
    return EXIT_OK


def _cmd_holder(args) -> int:
    u = _read(args)
    idx = HolderIndex(args.k, args.beta)
    result = holder_norm(u, idx).as_dict()
    stability = double_window_stability(u, idx) if u.is_compact() else None
    report = make_report(
        "holder",
        {"k": args.k, "beta": args.beta, "h": args.h, "input": args.input, "extension": str(args.extension)},
        dict(result, stability=stability),
        _tolerances(args),
        {"window_inflated": u.is_compact(), "stability_checked": stability is not None},
    )
    _emit(dump_report(report) + "\n", args.report)
    return EXIT_OK


def _cmd_schauder(args) -> int:
    families = []
    for name in args.families.split(","):
        name = name.strip()
        if not name:
            continue
        if name not in FAMILIES_BY_NAME:
            raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES_BY_NAME)}")
        base = FAMILIES_BY_NAME[name]
        families.append(TestFamily(base.name, base.generator, args.seed))
    betas = args.beta_list or []
    if args.case != "iv" and not betas:
        raise ValueError(f"case {args.case} needs --beta-list")
    sweep = run_sweep(args.case, families, args.alpha_list, betas, args.h_list, k=args.k, half_width=args.half_width)
    results = sweep.as_dict()
    report = make_report(
        "schauder",
        {
            "case": args.case,
            "alphas": args.alpha_list,
            "betas": betas,
            "h_list": args.h_list,
            "families": [f.name for f in families],
            "seed": args.seed,
            "k": args.k,
        },
        results,
        {"spread_limit": 2.0, "stability_limit": 1e-3, "identity": 1e-9},
        {
            "max_ratio_defined": sweep.max_ratio is not None,
            "all_finite": sweep.all_finite(),
            "stable_under_window_doubling": all(v <= 1e-3 for v in sweep.stability.values()),
        },
    )
    _emit(dump_report(report) + "\n", args.report)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    modules = None
    if args.filter:
        modules = {m.strip() for m in args.filter.split(",") if m.strip()}
        unknown = modules - set(MODULES)
        if unknown:
            raise ValueError(f"unknown module(s) {sorted(unknown)}; choose from {', '.join(MODULES)}")
    if args.inject_fault == "kernel":
        with injected_fault():
            results = acceptance.run_criteria(modules, args.seed)
    else:
        results = acceptance.run_criteria(modules, args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    if failed:
        print("FAILED: " + ", ".join(f"{r.number}:{r.name}" for r in failed))
    if args.report:
        report = make_report(
            "selftest",
            {"filter": sorted(modules) if modules else None, "inject_fault": args.inject_fault, "seed": args.seed},
            [r.as_dict() for r in results],
            {r.number: r.threshold for r in results},
            {"passed": not failed, "failed": [r.number for r in failed]},
        )
        dump_report(report, args.report)
    return EXIT_FAILED if failed else EXIT_OK


def _emit(text: str, dest) -> None:
    if dest is None or str(dest) == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)


COMMANDS = {
    "kernel": _cmd_kernel,
    "apply": _cmd_apply,
    "evolve": _cmd_evolve,
    "holder": _cmd_holder,
    "schauder": _cmd_schauder,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (QuadratureNotConverged, WindowTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except CrossCheckFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (DiscFracError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
