"""Command-line entry point: ``clex <subcommand> ...``.

Exit codes: 0 success, 1 no solution (``solve``), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .clex_regular import build_product_dfa
from .engine import Limits, Outcome
from .nsp.bench import results_csv, run_benchmark, run_instance, summarize, summary_text
from .nsp.instance import (InstanceFormatError, format_instance, generate_instance,
                           parse_instance)
from .nsp.model import MODES, REGULAR_MODES, SEQUENCE_MODES, ModelConfig
from .nsp.presets import DFA_PRESETS, SHIFT_NAMES
from .nsp.separation import run_separation
from .regular import Dfa, DfaFormatError
from .sequence import SequenceSpec


class UsageError(Exception):
    pass


def _pair(text: str, what: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must look like 'lo,hi', got {text!r}") from None
    return a, b


def parse_seq(text: str) -> SequenceSpec:
    try:
        l, u, k = (int(t) for t in text.split(","))
        return SequenceSpec(l, u, k)
    except ValueError as e:
        raise UsageError(f"--seq expects l,u,k with 0<=l<=u<=k, k>=1 ({e})") from None


def load_dfa(ref: str) -> Dfa:
    """A preset name or a path to a DFA text file."""
    if ref in DFA_PRESETS:
        return DFA_PRESETS[ref]()
    try:
        return Dfa.load(ref)
    except OSError as e:
        raise UsageError(f"cannot read DFA {ref!r}: {e.strerror}") from None
    except DfaFormatError as e:
        raise UsageError(f"{ref}: {e}") from None


def _limits(args) -> Limits:
    return Limits(nodes=getattr(args, "nodes", None), seconds=args.timeout)


def _configs(args, boolean: bool) -> list[ModelConfig]:
    modes = args.mode.split(",") if args.mode != "all" else list(
        SEQUENCE_MODES if boolean else REGULAR_MODES)
    spec = parse_seq(args.seq) if args.seq else SequenceSpec(2, 3, 4)
    dfa = load_dfa(args.dfa) if args.dfa else DFA_PRESETS["rest"]()
    out = []
    for mode in modes:
        if mode not in MODES:
            raise UsageError(f"unknown mode {mode!r}; choose from all, {', '.join(MODES)}")
        if mode in SEQUENCE_MODES:
            out.append(ModelConfig(mode, spec=spec, limits=_limits(args)))
        else:
            out.append(ModelConfig(mode, dfa=dfa, limits=_limits(args)))
    return out


def _read_instance(path: str):
    try:
        return parse_instance(path)
    except OSError as e:
        raise UsageError(f"cannot read instance {path!r}: {e.strerror}") from None
    except InstanceFormatError as e:
        raise UsageError(f"{path}: {e}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    lo, hi = _pair(args.demand, "--demand")
    shift_model = args.shifts > 1
    try:
        insts = [generate_instance(args.seed + k, args.n, args.m, (lo, hi),
                                   shift_model=shift_model, shifts=args.shifts)
                 for k in range(args.count)]
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.count == 1:
        _emit(format_instance(insts[0]), args.out)
        return 0
    if not args.out:
        raise UsageError("--count > 1 needs --out DIR")
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for k, inst in enumerate(insts):
        (outdir / f"inst_{k:03d}.txt").write_text(format_instance(inst))
    return 0


def format_schedule(rows: list[list[int]], boolean: bool) -> str:
    if boolean:
        return "\n".join(" ".join(map(str, r)) for r in rows) + "\n"
    return "\n".join(" ".join(SHIFT_NAMES[v] for v in r) for r in rows) + "\n"


def cmd_solve(args) -> int:
    inst = _read_instance(args.instance)
    if args.mode == "all" or "," in args.mode:
        raise UsageError("solve takes a single --mode")
    (config,) = _configs(args, inst.boolean)
    try:
        res = run_instance(inst, config, args.instance)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(f"# {config.name}: {res.outcome.value}, nodes={res.nodes}, "
          f"backtracks={res.backtracks}, ms={res.ms:.1f}", file=sys.stderr)
    if res.outcome is Outcome.SOLUTION:
        _emit(format_schedule(res.solution, inst.boolean), args.out)
        return 0
    if res.outcome is Outcome.UNSAT:
        print("no solution", file=sys.stderr)
    else:
        print("limit reached before a solution was found", file=sys.stderr)
    return 1


def cmd_bench(args) -> int:
    if args.instances:
        named = [(p, _read_instance(p)) for p in args.instances]
    else:
        lo, hi = _pair(args.demand, "--demand")
        named = [(f"seed{args.seed + k}",
                  generate_instance(args.seed + k, args.n, args.m, (lo, hi)))
                 for k in range(args.count)]
    kinds = {inst.boolean for _, inst in named}
    if len(kinds) > 1:
        raise UsageError("bench instances mix Boolean and shift models")
    configs = _configs(args, kinds.pop() if kinds else True)
    try:
        results = run_benchmark(named, configs, _limits(args), jobs=args.jobs)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.out:
        Path(args.out).write_text(results_csv(results))
    sys.stdout.write(summary_text(summarize(results)))
    return 0


def cmd_compile_product(args) -> int:
    if not args.dfa:
        raise UsageError("compile-product needs --dfa FILE")
    dfa = load_dfa(args.dfa)
    _emit(build_product_dfa(dfa, dfa).to_text(), args.out)
    return 0


def cmd_demo_separation(args) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    rows = run_separation(range(2, args.n + 1), _limits(args))
    lines = ["n  combined_bt  decomposed_bt  combined_nodes  decomposed_nodes"]
    for r in rows:
        lines.append(f"{r.n:<2} {r.combined.backtracks:>12} {r.decomposed.backtracks:>14}"
                     f" {r.combined.nodes:>15} {r.decomposed.nodes:>17}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clex", description="Lex-combined propagators and NSP benchmark")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, mode=True):
        if mode:
            sp.add_argument("--mode", default="clex-seq",
                            help=f"one of {', '.join(MODES)} (bench also accepts 'all' or a comma list)")
            sp.add_argument("--seq", help="Sequence row constraint l,u,k (default 2,3,4)")
            sp.add_argument("--dfa", help=f"DFA file or preset ({', '.join(DFA_PRESETS)})")
        sp.add_argument("--timeout", type=float, default=None, help="seconds per run")
        sp.add_argument("--out", help="output file (stdout by default)")

    g = sub.add_parser("generate", help="write seeded random instances")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=10, help="nurses")
    g.add_argument("--m", type=int, default=14, help="days")
    g.add_argument("--shifts", type=int, default=1, help="1 = Boolean model, >1 = shift model")
    g.add_argument("--demand", default="3,6", help="per-day (or per-shift) demand range lo,hi")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve one instance and print the schedule")
    s.add_argument("instance")
    common(s)
    s.add_argument("--nodes", type=int, default=None, help="node limit")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run modes over instances, print summary table")
    b.add_argument("instances", nargs="*", help="instance files (default: generate)")
    common(b)
    b.set_defaults(mode="all")
    b.add_argument("--nodes", type=int, default=None, help="node limit per run")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--count", type=int, default=10)
    b.add_argument("--n", type=int, default=10)
    b.add_argument("--m", type=int, default=14)
    b.add_argument("--demand", default="3,6")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("compile-product", help="emit the C&Lex product automaton of a DFA")
    c.add_argument("--dfa", help="DFA file or preset")
    c.add_argument("--out")
    c.set_defaults(func=cmd_compile_product)

    d = sub.add_parser("demo-separation", help="separation scenario for n = 2..N")
    d.add_argument("--n", type=int, default=8)
    common(d, mode=False)
    d.set_defaults(func=cmd_demo_separation)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with 2 on bad syntax
    try:
        return args.func(args)
    except UsageError as e:
        print(f"clex {args.cmd}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
