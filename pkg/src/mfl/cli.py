"""Command-line entry point: check / run / diff / fuzz / bench / trace.

Exit codes: 0 success, 1 parse/type/runtime error in the program, 2
differential mismatch, 3 internal invariant breach, 64 usage error.
All randomness (fuzz cases, benchmark permutations) flows from one
--seed; without it, MFL_SEED is consulted, then an entropy-derived seed
is drawn and printed so a run can be reproduced.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
from pathlib import Path

from .bench import bench_quicksort
from .deepcall import call_with_deep_stack
from .errors import InternalInvariantError, MflRuntimeError, MflTypeError, ParseError
from .eval_memo import EvalConfig, run_program
from .eval_pure import diff_check, run_program_pure
from .gen import GenLimits, gen_program
from .parser import parse
from .pretty import print_program, print_value
from .syntax import erase, format_type
from .typecheck import check_program

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_MISMATCH = 2
EXIT_INVARIANT = 3
EXIT_USAGE = 64


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("MFL_SEED")
    if env is not None:
        return int(env)
    seed = secrets.randbits(32)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _load_program(path: str):
    text = Path(path).read_text(encoding="utf-8")
    program = parse(text)
    check_program(program)
    return program


def _stats_json(stats, seed: int) -> str:
    doc = {"seed": seed, **stats.as_dict()}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def cmd_check(args) -> int:
    program = _load_program(args.file)
    print(format_type(check_program(program)))
    return EXIT_OK


def cmd_run(args) -> int:
    program = _load_program(args.file)
    seed = _resolve_seed(args)
    if args.semantics == "pure":
        result = call_with_deep_stack(run_program_pure, program)
        print(print_value(result.value, result.state.boxes))
        stats = result.stats
    else:
        cfg = EvalConfig(mode="cold" if args.cold else "normal", checked=args.checked)
        result = call_with_deep_stack(run_program, program, cfg)
        print(print_value(erase(result.value), result.store.boxes))
        stats = cfg.stats
    if args.stats:
        Path(args.stats).write_text(_stats_json(stats, seed), encoding="utf-8")
    return EXIT_OK


def cmd_diff(args) -> int:
    program = _load_program(args.file)
    verdict = call_with_deep_stack(diff_check, program)
    if verdict.ok:
        print(f"ok: {verdict.detail}")
        return EXIT_OK
    print(f"mismatch: {verdict.detail}")
    if verdict.memo_value is not None:
        print(f"  memoized: {print_value(verdict.memo_value)}")
        print(f"  pure:     {print_value(verdict.pure_value)}")
    return EXIT_MISMATCH


def cmd_fuzz(args) -> int:
    seed = _resolve_seed(args)
    out_dir = Path(args.out)
    failures = 0
    for i in range(args.count):
        program = gen_program(f"{seed}:{i}", GenLimits())
        verdict = call_with_deep_stack(diff_check, program)
        if not verdict.ok:
            failures += 1
            out_dir.mkdir(parents=True, exist_ok=True)
            case = out_dir / f"case-{seed}-{i}.mfl"
            case.write_text(print_program(program), encoding="utf-8")
            print(f"mismatch on generated program {i}: {verdict.detail} -> {case}")
    print(f"fuzz: {args.count - failures}/{args.count} programs agree (seed {seed})")
    return EXIT_MISMATCH if failures else EXIT_OK


def cmd_bench(args) -> int:
    seed = _resolve_seed(args)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    doc = bench_quicksort(sizes, args.trials, seed)
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_trace(args) -> int:
    program = _load_program(args.file)
    cfg = EvalConfig(checked=args.checked)
    result = call_with_deep_stack(run_program, program, cfg)
    tables = []
    for loc in sorted(result.store.tables):
        entries = [
            {"branch": [list(code) for code in branch],
             "value": print_value(value, result.store.boxes)}
            for branch, value in result.store.tables[loc].items()
        ]
        tables.append({"location": loc, "entries": entries})
    print(json.dumps(tables, indent=2))
    return EXIT_OK


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="mfl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and typecheck a program")
    p.add_argument("file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("run", help="evaluate a program and print its value")
    p.add_argument("file")
    p.add_argument("--semantics", choices=("memo", "pure"), default="memo")
    p.add_argument("--cold", action="store_true",
                   help="pay memo costs but never reuse results")
    p.add_argument("--checked", action="store_true",
                   help="enable run-time invariant assertions")
    p.add_argument("--seed", type=int)
    p.add_argument("--stats", metavar="PATH", help="write counters as JSON")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("diff", help="compare memoized and pure outcomes")
    p.add_argument("file")
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=cmd_diff)

    p = sub.add_parser("fuzz", help="differential-test generated programs")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="fuzz-failures",
                   help="directory for counterexample programs")
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("bench", help="run a benchmark and write JSON rows")
    p.add_argument("benchmark", choices=("quicksort",))
    p.add_argument("--sizes", default="128,256,512,1024")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("trace", help="run a program and dump its memo tables")
    p.add_argument("file")
    p.add_argument("--checked", action="store_true")
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=cmd_trace)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, MflTypeError) as exc:
        target = getattr(args, "file", "<input>")
        print(f"{target}:{exc}", file=sys.stderr)
        return EXIT_USER_ERROR
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except MflRuntimeError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR


if __name__ == "__main__":
    sys.exit(main())
