"""Command-line interface: permanents, closed-form overlaps, optimizers,
inequality verification runs, and the W/Wbar mixture sweep.

Exit codes: 0 success, 1 validation/parse error, 2 optimizer
non-convergence (values still printed), 3 theorem violation (an
implementation bug by definition).

Commands that write a report file also emit a run manifest next to it
(``<output>.manifest.json``) and, for tabular reports, a rendered figure;
stdout-only commands print the manifest to stderr. Primary outputs are
byte-deterministic for fixed flags and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SympermError, ValidationError
from .families import overlap_at_theta, ww_bar_sweep
from .geometric import (
    OptimizerConfig,
    e_log,
    e_sin2,
    lambda_closed_form,
    lambda_qubit,
    maximize_general,
    maximize_symmetric,
)
from .inequalities import GAP_TOL, run_trials
from .io import load
from .permanents import (
    MultisetColumns,
    expand_multiset,
    permanent_multiset,
    permanent_naive,
    permanent_ryser,
)
from .states import ProductState, SymmetricState, product_to_dense, symmetric_to_dense

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NO_CONVERGENCE = 2
EXIT_THEOREM_VIOLATED = 3

THEOREM_TARGETS = {"cll", "averaging", "maclaurin", "conjecture"}


def fmt(x: float) -> str:
    """12 significant digits, shortest of plain/scientific."""
    return "%.12g" % float(x)


def fmt_complex(z: complex) -> str:
    z = complex(z)
    sign = "+" if z.imag >= 0 or math.isnan(z.imag) else "-"
    return "%s %s %si" % (fmt(z.real), sign, fmt(abs(z.imag)))


def thread_cap() -> int:
    """Parallelism cap from SYMPERM_THREADS (0 = auto). Execution is
    sequential, which always respects the cap; the value is recorded in
    the manifest for provenance."""
    raw = os.environ.get("SYMPERM_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError("SYMPERM_THREADS must be an integer, got %r" % raw)
    if cap < 0:
        raise ValidationError("SYMPERM_THREADS must be >= 0")
    return cap


class _Parser(argparse.ArgumentParser):
    # spec'd exit-code contract: bad parameters exit 1, not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit((EXIT_VALIDATION, "error: %s" % message))


def _emit_manifest(args, stdout_text: str, files: list[Path], started: float) -> None:
    checksums = {"stdout": hashlib.sha256(stdout_text.encode()).hexdigest()}
    for f in files:
        checksums[f.name] = hashlib.sha256(f.read_bytes()).hexdigest()
    manifest = {
        "command": args.command,
        "parameters": {
            k: v for k, v in sorted(vars(args).items()) if k != "command" and v is not None
        },
        "seed": args.seed,
        "version": __version__,
        "threads": thread_cap(),
        "wall_time_s": round(time.monotonic() - started, 6),
        "output_checksum": checksums,
    }
    text = json.dumps(manifest, indent=1, default=str) + "\n"
    if getattr(args, "output", None):
        path = Path(args.output)
        path.with_name(path.name + ".manifest.json").write_text(text)
    else:
        sys.stderr.write(text)


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(
        max_iterations=args.max_iter,
        tolerance=args.tol,
        restarts=args.restarts,
        seed=args.seed,
    )


def cmd_perm(args) -> tuple[int, str, list[Path]]:
    obj = load(args.input)
    limit = args.guard_override
    if args.algorithm == "multiset":
        if not isinstance(obj, MultisetColumns):
            raise ValidationError("multiset algorithm needs a multiset-columns file")
        value = permanent_multiset(obj)
    else:
        if isinstance(obj, MultisetColumns):
            matrix = expand_multiset(obj)
        elif isinstance(obj, np.ndarray):
            matrix = obj
        else:
            raise ValidationError("input must be a matrix or multiset-columns file")
        kernel = permanent_naive if args.algorithm == "naive" else permanent_ryser
        value = kernel(matrix, order_limit=limit)
    return EXIT_OK, fmt_complex(value) + "\n", []


def cmd_lambda(args) -> tuple[int, str, list[Path]]:
    parts = [int(v) for v in args.k.split(",")]
    if args.kind == "qubit":
        if len(parts) != 1:
            raise ValidationError("qubit kind takes a single k")
        lam = lambda_qubit(args.n, parts[0])
    else:
        if sum(parts) != args.n:
            raise ValidationError("composition %r does not sum to n=%d" % (parts, args.n))
        lam = lambda_closed_form(parts)
    lines = ["lambda_max = %s" % fmt(lam), "e_sin2 = %s" % fmt(e_sin2(lam))]
    lines.append("e_log = %s" % (fmt(e_log(lam)) if lam > 0 else "inf"))
    return EXIT_OK, "\n".join(lines) + "\n", []


def cmd_optimize(args) -> tuple[int, str, list[Path]]:
    obj = load(args.input)
    cfg = _optimizer_config(args)
    if args.ansatz == "symmetric":
        if not isinstance(obj, SymmetricState):
            raise ValidationError("symmetric ansatz needs a symmetric-state file")
        report = maximize_symmetric(obj, cfg)
    else:
        if isinstance(obj, SymmetricState):
            dense = symmetric_to_dense(obj)
        elif isinstance(obj, ProductState):
            dense = product_to_dense(obj)
        else:
            raise ValidationError("general ansatz needs a symmetric- or product-state file")
        report = maximize_general(dense, cfg)
    lam = report.lambda_max
    lines = [
        "lambda_max = %s" % fmt(lam),
        "e_sin2 = %s" % fmt(e_sin2(min(lam, 1.0))),
        "e_log = %s" % (fmt(e_log(min(lam, 1.0))) if lam > 0 else "inf"),
        "converged = %s" % ("true" if report.converged else "false"),
        "iterations_used = %d" % report.iterations_used,
        "restarts_used = %d" % report.restarts_used,
    ]
    files: list[Path] = []
    if args.output:
        path = Path(args.output)
        doc = {
            "lambda_max": lam,
            "converged": report.converged,
            "iterations_used": report.iterations_used,
            "restarts_used": report.restarts_used,
            "maximizer": [
                [[z.real, z.imag] for z in np.atleast_2d(report.maximizer)[i]]
                for i in range(np.atleast_2d(report.maximizer).shape[0])
            ],
        }
        path.write_text(json.dumps(doc, indent=1) + "\n")
        files.append(path)
    code = EXIT_OK if report.converged else EXIT_NO_CONVERGENCE
    return code, "\n".join(lines) + "\n", files


def cmd_verify(args) -> tuple[int, str, list[Path]]:
    cfg = _optimizer_config(args)
    targets = [args.target] if args.target != "probe" else ["probe", "probe-optimized"]
    lines = []
    files: list[Path] = []
    violations_total = 0
    all_records = []
    for target in targets:
        summary = run_trials(
            target,
            trials=args.trials,
            seed=args.seed,
            n=args.n,
            d=args.d,
            gap_tol=args.gap_tol,
            cfg=cfg,
            keep_records=True,
        )
        label = "" if target == args.target else "_optimized"
        lines += [
            "target = %s" % target,
            "trials%s = %d" % (label, summary.trials),
            "violations%s = %d" % (label, summary.violations),
            "min_slack%s = %s" % (label, fmt(summary.min_slack)),
        ]
        violations_total += summary.violations
        all_records.append((target, summary))
    if args.output:
        path = Path(args.output)
        with open(path, "w", encoding="utf-8") as fh:
            for target, summary in all_records:
                for rec in summary.violating:
                    fh.write(
                        json.dumps(
                            {
                                "target": target,
                                "instance_seed": rec.instance_seed,
                                "n": args.n,
                                "d": args.d,
                                "lhs": rec.lhs,
                                "rhs": rec.rhs,
                                "slack": rec.slack,
                            }
                        )
                        + "\n"
                    )
        files.append(path)
        from .plots import save_slack_figure

        fig_path = path.with_suffix(".png")
        slacks = [rec.slack for _, summary in all_records for rec in summary.records]
        save_slack_figure(slacks, fig_path, title="%s slack (%d trials)" % (args.target, args.trials))
        files.append(fig_path)
    if args.target in THEOREM_TARGETS and violations_total > 0:
        return EXIT_THEOREM_VIOLATED, "\n".join(lines) + "\n", files
    return EXIT_OK, "\n".join(lines) + "\n", files


def cmd_sweep_wwbar(args) -> tuple[int, str, list[Path]]:
    points = ww_bar_sweep(args.steps)
    path = Path(args.output) if args.output else Path("wwbar_sweep.csv")
    header = "s,tan_theta,theta,lambda_direct,lambda_paper_prefactor,e_sin2"
    rows = [header]
    sqrt3 = math.sqrt(3.0)
    for p in points:
        rows.append(
            ",".join(
                fmt(v)
                for v in (
                    p.s,
                    p.tan_theta,
                    p.theta,
                    p.lambda_max,
                    p.lambda_max / sqrt3,
                    e_sin2(p.lambda_max),
                )
            )
        )
    try:
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ValidationError("cannot write %s: %s" % (path, exc))
    files = [path]
    from .plots import save_sweep_figure

    fig_path = path.with_suffix(".png")
    save_sweep_figure(points, fig_path)
    files.append(fig_path)
    return EXIT_OK, "wrote %d rows to %s\n" % (len(points), path), files


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--tol", type=float, default=1e-10, help="optimizer tolerance")
    common.add_argument("--max-iter", type=int, default=10000, help="optimizer iteration cap")
    common.add_argument("--restarts", type=int, default=20, help="optimizer restarts")
    common.add_argument(
        "--guard-override", type=int, default=None, help="override kernel size guards"
    )
    common.add_argument("--output", default=None, help="report/output file path")

    parser = _Parser(prog="symperm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("perm", parents=[common], help="permanent of a matrix file")
    p.add_argument("input", help="matrix or multiset-columns JSON file")
    p.add_argument("--algorithm", choices=("naive", "ryser", "multiset"), default="ryser")
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("lambda", parents=[common], help="closed-form overlap for a Dicke state")
    p.add_argument("kind", choices=("dicke", "qubit"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", required=True, help="comma-separated composition (or single k for qubit)")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("optimize", parents=[common], help="numerical overlap maximization")
    p.add_argument("input", help="symmetric- or product-state JSON file")
    p.add_argument("--ansatz", choices=("symmetric", "general"), default="symmetric")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", parents=[common], help="randomized inequality verification")
    p.add_argument("target", choices=("cll", "averaging", "maclaurin", "probe", "conjecture"))
    p.add_argument("--n", type=int, default=None, help="instance size (default: per-trial random)")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--gap-tol", type=float, default=GAP_TOL)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep-wwbar", parents=[common], help="tabulate the W/Wbar mixture family")
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_sweep_wwbar)

    return parser


def main(argv=None) -> int:
    started = time.monotonic()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, tuple):
            code, message = exc.code
            print(message, file=sys.stderr)
            return code
        return 0 if exc.code in (0, None) else EXIT_VALIDATION
    try:
        code, stdout_text, files = args.func(args)
    except SympermError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    sys.stdout.write(stdout_text)
    _emit_manifest(args, stdout_text, files, started)
    return code


if __name__ == "__main__":
    sys.exit(main())
