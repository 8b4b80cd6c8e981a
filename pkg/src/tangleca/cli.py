"""Command-line interface.

Subcommands:
  interpret  run a program on a state with the reference interpreter
  compile    lower a program to a rule set and print or save it
  simulate   compile and run the automaton, printing the final state
  difftest   random differential testing of automaton vs interpreter
  bench      step-complexity benchmarks with pass/fail windows

Exit codes: 0 success; 1 disagreement or failed benchmark window;
2 bad input; 3 step/tick budget exhausted; 4 invariant violation.
"""
from __future__ import annotations

import argparse
import random
import sys

from . import asmlang
from . import automaton
from . import bench
from . import compiler
from . import corpusgen
from . import difftest
from . import hfset
from . import interpreter
from . import kernel
from . import pattern
from . import tangle

OK, FAIL, BADINPUT, EXHAUSTED, INVARIANT = 0, 1, 2, 3, 4


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SystemExit2("cannot read %s: %s" % (path, exc))


class SystemExit2(Exception):
    """Input problem: message printed to stderr, exit code 2."""


def _load_case(args, universe):
    program = asmlang.parse(_read(args.program))
    violations = asmlang.validate(program)
    if violations:
        raise SystemExit2("invalid program:\n  " + "\n  ".join(violations))
    if args.state:
        state = interpreter.parse_state(_read(args.state), program,
                                        universe)
    else:
        state = interpreter.State()
    return program, state


def cmd_interpret(args):
    universe = hfset.Universe(max_depth=args.max_depth)
    program, state = _load_case(args, universe)
    final, steps, outcome = interpreter.run_to_termination(
        program, state, universe, seed=args.seed,
        max_steps=args.max_steps)
    sys.stdout.write(interpreter.print_state(final))
    print("outcome %s after %d steps" % (outcome, steps))
    if outcome == interpreter.BUDGET:
        return EXHAUSTED
    return OK


def cmd_compile(args):
    program = asmlang.parse(_read(args.program))
    violations = asmlang.validate(program)
    if violations:
        raise SystemExit2("invalid program:\n  " + "\n  ".join(violations))
    try:
        unit = compiler.compile_program(
            program, negative_edges=args.negative_edges)
    except compiler.CompileError as exc:
        raise SystemExit2("compile error: %s" % exc)
    text = pattern.serialize_ruleset(unit.ruleset)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print("%d rules -> %s" % (len(unit.ruleset.rules), args.output))
    else:
        sys.stdout.write(text)
    return OK


def cmd_simulate(args):
    universe = hfset.Universe(max_depth=args.max_depth)
    program, state = _load_case(args, universe)
    try:
        unit = compiler.compile_program(
            program, negative_edges=args.negative_edges)
    except compiler.CompileError as exc:
        raise SystemExit2("compile error: %s" % exc)
    graph = unit.initial_graph(state, universe)
    mode = automaton.RANDOM if args.random else automaton.DETERMINISTIC
    cfg = automaton.Configuration(graph, seed=args.seed, mode=mode)

    dot_sink = []

    def on_tick(c, applied):
        if args.dot_every and c.tick % args.dot_every == 0:
            dot_sink.append((c.tick, c.tangle.to_dot()))

    try:
        if args.trace:
            entries, cfg, stats, outcome = automaton.trace(
                cfg, unit.ruleset, max_ticks=args.max_ticks,
                negative_edges=args.negative_edges)
            with open(args.trace, "w", encoding="utf-8") as fh:
                fh.write(automaton.format_trace(entries))
        else:
            cfg, stats, outcome = automaton.run(
                cfg, unit.ruleset, max_ticks=args.max_ticks,
                negative_edges=args.negative_edges,
                check_invariants=args.check_invariants,
                idle_colors=unit.idle_colors,
                universe=universe,
                on_tick=on_tick if args.dot_every else None)
    except automaton.InvariantViolation as exc:
        print("invariant violation: %s" % exc, file=sys.stderr)
        return INVARIANT
    for tick, dot in dot_sink:
        path = "%s-%06d.dot" % (args.dot_prefix, tick)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dot)
    if outcome != automaton.QUIESCENT:
        print("outcome %s after %d ticks" % (outcome, stats.total))
        return EXHAUSTED
    classification = unit.classify(cfg.tangle)
    if classification == interpreter.TERMINAL:
        final = unit.final_state(cfg.tangle, universe)
        sys.stdout.write(interpreter.print_state(final))
    print("outcome %s after %d ticks" % (classification, stats.total))
    sys.stdout.write(stats.format())
    return OK


def cmd_difftest(args):
    universe = hfset.Universe(max_depth=args.max_depth)
    rng = random.Random(args.seed)
    failures = 0
    for i in range(args.count):
        program, state = corpusgen.generate_case(
            rng, universe, allow_choice=args.allow_choice,
            require_choice=True if args.only_choice else None,
            max_steps=args.max_steps)
        result = difftest.run_case(
            program, state, universe,
            seeds=tuple(range(1, args.runs + 1)),
            negative_edges=args.negative_edges,
            max_ticks=args.max_ticks,
            check_invariants=args.check_invariants,
            label="case%03d" % i)
        if result.ok:
            print("ok   case%03d (%d ticks)" % (i, result.ticks))
        else:
            failures += 1
            for d in result.disagreements:
                print("FAIL " + d)
            if args.verbose:
                print(asmlang.pretty_print(program))
                sys.stdout.write(interpreter.print_state(state))
    print("%d/%d cases agree" % (args.count - failures, args.count))
    return FAIL if failures else OK


def cmd_bench(args):
    names = args.family or None
    for name in names or ():
        if name not in bench.FAMILIES:
            raise SystemExit2("unknown benchmark family %r (have: %s)"
                              % (name, ", ".join(sorted(bench.FAMILIES))))
    results = bench.run_all(negative_edges=args.negative_edges,
                            names=names)
    all_ok = True
    for r in results:
        print(r.format())
        all_ok = all_ok and r.ok
    print("kernel: %s" % kernel.KERNEL_NAME)
    return OK if all_ok else FAIL


def build_parser():
    p = argparse.ArgumentParser(
        prog="tangleca",
        description="set-rewriting automaton compiler and toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, state=True):
        sp.add_argument("program", help="program file (.asml)")
        if state:
            sp.add_argument("state", nargs="?",
                            help="initial state file (.state); "
                                 "defaults to all-empty criticals")
        sp.add_argument("--max-depth", type=int, default=64,
                        help="value nesting limit (default 64)")

    sp = sub.add_parser("interpret", help="run the reference interpreter")
    common(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-steps", type=int, default=interpreter.MAX_STEPS)
    sp.set_defaults(func=cmd_interpret)

    sp = sub.add_parser("compile", help="lower a program to a rule set")
    sp.add_argument("program")
    sp.add_argument("-o", "--output", help="write rule set to a file")
    sp.add_argument("--negative-edges", action="store_true")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("simulate", help="compile and run the automaton")
    common(sp)
    sp.add_argument("--seed", type=int, default=0)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--deterministic", action="store_true",
                       help="smallest-match tie-breaking (default)")
    group.add_argument("--random", action="store_true",
                       help="seeded-random tie-breaking")
    sp.add_argument("--max-ticks", type=int,
                    default=automaton.DEFAULT_MAX_TICKS)
    sp.add_argument("--trace", metavar="FILE",
                    help="write a full per-tick trace")
    sp.add_argument("--dot-every", type=int, metavar="K",
                    help="write a graphviz snapshot every K ticks")
    sp.add_argument("--dot-prefix", default="tangle",
                    help="snapshot filename prefix (default 'tangle')")
    sp.add_argument("--negative-edges", action="store_true")
    sp.add_argument("--check-invariants", action="store_true")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("difftest",
                        help="random differential testing vs interpreter")
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--runs", type=int, default=2,
                    help="random-schedule runs per case (default 2)")
    sp.add_argument("--allow-choice", action="store_true")
    sp.add_argument("--only-choice", action="store_true")
    sp.add_argument("--negative-edges", action="store_true")
    sp.add_argument("--check-invariants", action="store_true")
    sp.add_argument("--max-steps", type=int,
                    default=corpusgen.DEFAULT_MAX_STEPS)
    sp.add_argument("--max-ticks", type=int,
                    default=difftest.DEFAULT_MAX_TICKS)
    sp.add_argument("--max-depth", type=int, default=64)
    sp.add_argument("--verbose", action="store_true")
    sp.set_defaults(func=cmd_difftest)

    sp = sub.add_parser("bench", help="step-complexity benchmarks")
    sp.add_argument("family", nargs="*",
                    help="benchmark families (default: all of %s)"
                         % ", ".join(sorted(bench.FAMILIES)))
    sp.add_argument("--negative-edges", action="store_true")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print("error: %s" % exc, file=sys.stderr)
        return BADINPUT
    except (asmlang.ParseError, hfset.HFParseError,
            interpreter.StateError, tangle.TangleError,
            pattern.RuleError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return BADINPUT


if __name__ == "__main__":
    sys.exit(main())
