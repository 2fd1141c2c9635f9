"""Command line front end.

Subcommands: verify (randomized identity suites), bound (distance lower
bound at one lambda), probe (range-distance estimate at one lambda and
dimension), scan (a lambda sweep emitted as CSV, optionally with a rendered
figure), apply (apply G, T, or G* to a serialized input).

Exit codes: 0 success, 1 verification or consistency failure, 2 usage
error.  All randomness is seeded; a command's output is reproducible from
its full flag set (runtime_ms aside).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import plotting, verification
from .operators import BidualElem, g_star_apply, gossez_apply, t_apply
from .probe import (
    ProbeResult,
    distance_lower_bound,
    neg_e_star,
    probe_exact,
    probe_heuristic,
    theorem_consistency_check,
)
from .sequences import EvConstSeq, SparseSeq, format_rational

SCAN_COLUMNS = ("lambda", "lower_bound", "estimate", "dim", "method",
                "patterns_explored", "runtime_ms")

AUTO_METHOD_EXACT_MAX_DIM = 8
EXACT_MAX_DIM = 12
THREADS_ENV = "GOSSEZ_LAB_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """Validated probe/scan parameters with the documented defaults."""

    dim: int
    method: str = "auto"  # auto | exact | heuristic
    budget: int = 2000
    seed: int = 42
    fmt: str = "text"

    def resolve_method(self) -> str:
        if self.method != "auto":
            return self.method
        return "exact" if self.dim <= AUTO_METHOD_EXACT_MAX_DIM else "heuristic"


def fmt12(value: float) -> str:
    return f"{value:.12g}"


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        print(f"warning: ignoring non-integer {THREADS_ENV}={raw!r}", file=sys.stderr)
        return 1


def _usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _write_output(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_target(spec: str) -> EvConstSeq:
    if spec == "neg-e-star":
        return neg_e_star()
    with open(spec, "r", encoding="utf-8") as handle:
        return EvConstSeq.from_json_dict(json.load(handle))


def _probe_row(result: ProbeResult) -> dict:
    return {
        "lambda": result.lam,
        "lower_bound": result.lower_bound,
        "estimate": result.estimate,
        "dim": result.dim,
        "method": result.method,
        "patterns_explored": result.patterns_explored,
        "runtime_ms": result.runtime_ms,
    }


def _rows_to_csv(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for row in rows:
        # str() of a float round-trips exactly, so parsing the CSV recovers
        # the in-memory table bit for bit
        writer.writerow([str(row[c]) for c in SCAN_COLUMNS])
    return buffer.getvalue()


def _probe_text(result: ProbeResult) -> str:
    entries = ", ".join(
        f"{i}: {format_rational(v)}" for i, v in result.certificate_x.entries
    )
    sel = result.certificate_selection
    sel_prefix = ", ".join(format_rational(v) for v in sel.prefix)
    lines = [
        f"lambda                = {fmt12(result.lam)}",
        f"dim                   = {result.dim}",
        f"method                = {result.method}",
        f"estimate              = {fmt12(result.estimate)}",
        f"lower_bound           = {fmt12(result.lower_bound)}",
        f"patterns_explored     = {result.patterns_explored}",
        f"seed                  = {result.seed}",
        f"runtime_ms            = {result.runtime_ms}",
        f"certificate_x         = {{{entries}}}",
        f"certificate_selection = prefix [{sel_prefix}] tail {format_rational(sel.tail)}",
    ]
    return "\n".join(lines) + "\n"


def _run_probe(lam: float, config: RunConfig, target: EvConstSeq) -> ProbeResult:
    method = config.resolve_method()
    if method == "exact":
        return probe_exact(lam, config.dim, target, seed=config.seed,
                           threads=_threads())
    return probe_heuristic(lam, config.dim, target, budget=config.budget,
                           seed=config.seed)


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args: argparse.Namespace) -> int:
    if args.cases < 1:
        return _usage(f"--cases must be >= 1, got {args.cases}")
    results = verification.run_verification(seed=args.seed, cases=args.cases)
    width = max(len(r.name) for r in results)
    for r in results:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {r.cases:>6} cases  {flag}")
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"counterexample: {json.dumps(failed[0].counterexample)}")
        return 1
    print(f"all {len(results)} suites passed")
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    lam = args.lam
    if not 0 < lam <= 4:
        return _usage(f"--lambda must lie in (0, 4], got {lam}")
    print(f"lambda        = {fmt12(lam)}")
    print(f"d(lambda)     = {fmt12(distance_lower_bound(lam))}")
    print(f"quarter_bound = {fmt12(0.25 * lam)}")
    return 0


def cmd_probe(args: argparse.Namespace) -> int:
    if args.lam <= 0:
        return _usage(f"--lambda must be positive, got {args.lam}")
    if args.dim < 1:
        return _usage(f"--dim must be >= 1, got {args.dim}")
    if args.budget < 1:
        return _usage(f"--budget must be >= 1, got {args.budget}")
    config = RunConfig(dim=args.dim, method=args.method, budget=args.budget,
                       seed=args.seed, fmt=args.format)
    if config.resolve_method() == "exact" and args.dim > EXACT_MAX_DIM:
        return _usage(
            f"exact method supports --dim at most {EXACT_MAX_DIM}; "
            f"use --method heuristic"
        )
    try:
        target = _load_target(args.target)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        return _usage(f"cannot load target {args.target!r}: {exc}")
    result = _run_probe(args.lam, config, target)

    if config.fmt == "json":
        text = json.dumps(result.to_json_dict(), indent=2) + "\n"
    elif config.fmt == "csv":
        text = _rows_to_csv([_probe_row(result)])
    else:
        text = _probe_text(result)
    _write_output(text, args.output)

    if target == neg_e_star() and not theorem_consistency_check(result):
        print(
            f"consistency failure: estimate {fmt12(result.estimate)} at "
            f"lambda {fmt12(result.lam)} contradicts the quadratic-form bound",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    if not 0 < args.lambda_min < args.lambda_max <= 4:
        return _usage(
            "scan range must satisfy 0 < --lambda-min < --lambda-max <= 4"
        )
    if args.steps < 2:
        return _usage(f"--steps must be >= 2, got {args.steps}")
    if args.dim < 1:
        return _usage(f"--dim must be >= 1, got {args.dim}")
    if args.budget < 1:
        return _usage(f"--budget must be >= 1, got {args.budget}")
    config = RunConfig(dim=args.dim, method=args.method, budget=args.budget,
                       seed=args.seed)
    if config.resolve_method() == "exact" and args.dim > EXACT_MAX_DIM:
        return _usage(
            f"exact method supports --dim at most {EXACT_MAX_DIM}; "
            f"use --method heuristic"
        )
    plot_path = args.plot
    if plot_path == "":
        if not args.output:
            return _usage("--plot needs a path when no --output file is given")
        plot_path = os.path.splitext(args.output)[0] + ".png"

    target = neg_e_star()
    step = (args.lambda_max - args.lambda_min) / (args.steps - 1)
    lams = [args.lambda_min + i * step for i in range(args.steps - 1)]
    lams.append(args.lambda_max)
    rows = []
    for lam in lams:
        result = _run_probe(lam, config, target)
        if not theorem_consistency_check(result):
            print(
                f"consistency failure: estimate {fmt12(result.estimate)} at "
                f"lambda {fmt12(lam)} contradicts the quadratic-form bound",
                file=sys.stderr,
            )
            return 1
        rows.append(_probe_row(result))
    _write_output(_rows_to_csv(rows), args.output)
    if plot_path:
        plotting.render_scan(rows, plot_path)
    return 0


def cmd_apply(args: argparse.Namespace) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        if args.operator == "Gstar":
            image = g_star_apply(BidualElem.from_json_dict(data))
        else:
            x = SparseSeq.from_json_dict(data)
            image = gossez_apply(x) if args.operator == "G" else t_apply(x)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        return _usage(f"cannot apply {args.operator} to {args.input!r}: {exc}")
    if args.format == "json":
        print(json.dumps(image.to_json_dict()))
    else:
        prefix = ", ".join(format_rational(v) for v in image.prefix)
        print(f"prefix = [{prefix}]")
        print(f"tail   = {format_rational(image.tail)}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gossez-lab",
        description="exact operator algebra and range-distance probes for "
                    "the skew summation operator on l1",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the randomized identity suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=500)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="distance lower bound at one lambda")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("probe", help="range-distance estimate at one lambda")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--target", default="neg-e-star",
                   help='"neg-e-star" or a path to a serialized sequence')
    p.add_argument("--method", choices=("auto", "exact", "heuristic"),
                   default="auto")
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("scan", help="sweep lambda and emit a CSV table")
    p.add_argument("--lambda-min", dest="lambda_min", type=float, required=True)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--method", choices=("auto", "exact", "heuristic"),
                   default="auto")
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", help="write the CSV here instead of stdout")
    p.add_argument("--plot", nargs="?", const="", default=None, metavar="PATH",
                   help="also render the scan as a figure (default: next to "
                        "the CSV)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("apply", help="apply G, T, or Gstar to a serialized input")
    p.add_argument("--operator", choices=("G", "T", "Gstar"), required=True)
    p.add_argument("--input", required=True,
                   help="path to a serialized SparseSeq (G, T) or BidualElem "
                        "(Gstar)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_apply)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def run() -> None:
    raise SystemExit(main())
