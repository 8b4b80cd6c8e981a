import sys
sys.path.insert(0, "src")

from tangleca import asmlang, automaton, compiler, hfset, interpreter, tangle

CASES = [
    ("swap",
     """
     criticals t, p;
     if t != p then (t := p par p := t)
     """,
     {"t": "{}", "p": "{{}}"},
     2),  # swaps forever -> run 2 rounds and compare mid-flight
    ("union-build",
     """
     atoms a, b;
     criticals t, p, r;
     if r = {} then r := {a} U ({b} U t)
     """,
     {"t": "{{a}}", "p": "{}"},
     None),
    ("singleton-chain",
     """
     criticals n;
     if n != {{{}}} then n := {n}
     """,
     {"n": "{}"},
     None),
    ("pairs-and-locations",
     """
     atoms a, b;
     functions g/2;
     criticals t, p;
     if t = {} then (t := <a, b> par g(a, b) := {a})
     else (if p = {} then p := g(a, b))
     """,
     {"p": "{}"},
     None),
    ("membership",
     """
     atoms a;
     criticals s;
     if not (a in s) then s := {a} U s
     """,
     {"s": "{}"},
     None),
    ("choice-conf",
     """
     criticals t;
     let x = choose(t) in t := x
     """,
     {"t": "{{}}"},
     None),
    ("choice-error",
     """
     criticals t;
     let x = choose(t) in t := {x}
     """,
     {"t": "{}"},
     None),
]


def run_case(name, src, init, rounds, negative_edges, mode, seed):
    u = hfset.Universe()
    prog = asmlang.parse(src)
    unit = compiler.compile_program(prog, negative_edges=negative_edges)
    state0 = interpreter.parse_state(
        "\n".join("term %s = %s" % (k, v) for k, v in init.items()),
        prog, u)

    g = unit.initial_graph(state0, u)
    cfg = automaton.Configuration(g, seed=seed, mode=mode)
    if rounds is None:
        cfg2, stats, outcome = automaton.run(
            cfg, unit.ruleset, max_ticks=200000,
            negative_edges=negative_edges,
            check_invariants=True, idle_colors=unit.idle_colors,
            universe=u)
        if outcome != automaton.QUIESCENT:
            return "%s: automaton outcome %s (color %s)" % (
                name, outcome, cfg2.tangle.color_of(cfg2.tangle.active))
        cls = unit.classify(cfg2.tangle)
        istate, steps, ioutcome = interpreter.run_to_termination(
            prog, state0, u, seed=seed, max_steps=500)
        if cls == interpreter.TERMINAL and ioutcome == interpreter.TERMINAL:
            astate = unit.final_state(cfg2.tangle, u)
            if astate.items() != istate.items():
                return "%s: MISMATCH\n  automaton: %s\n  interp:    %s" % (
                    name, astate.items(), istate.items())
            return None
        if cls == interpreter.EMPTY_CHOICE and ioutcome == interpreter.EMPTY_CHOICE:
            return None
        return "%s: outcome mismatch automaton=%s interp=%s" % (
            name, cls, ioutcome)
    else:
        # non-terminating program: stop the interpreter after `rounds`
        # transitions and pause the automaton each time it re-reaches
        # the first eval color, comparing decoded states
        istate = interpreter.initial_state(prog, state0, u)
        for _ in range(rounds):
            nxt = interpreter.fire(prog, istate, u,
                                   interpreter._Chooser(None, []))
            istate = nxt if nxt is not None else istate
        crossings = 0
        cfg2 = cfg
        for _ in range(200000):
            fired = automaton.step(cfg2, unit.ruleset,
                                   negative_edges=negative_edges)
            if fired is None:
                return "%s: stalled at color %s" % (
                    name, cfg2.tangle.color_of(cfg2.tangle.active))
            if cfg2.tangle.color_of(cfg2.tangle.active) == unit.first_color:
                crossings += 1
                # first crossing is the boot tick, before any transition
                if crossings == rounds + 1:
                    break
        astate = unit.final_state(cfg2.tangle, u)
        if astate.items() != istate.items():
            return "%s: MISMATCH after %d rounds\n  automaton: %s\n  interp:    %s" % (
                name, rounds, astate.items(), istate.items())
        return None


failures = 0
for name, src, init, rounds in CASES:
    for negmode in (False, True):
        for mode, seeds in ((automaton.DETERMINISTIC, [0]),
                            (automaton.RANDOM, [1, 7, 42])):
            for seed in seeds:
                msg = run_case(name, src, init, rounds, negmode, mode, seed)
                tag = "%s neg=%s %s seed=%d" % (name, negmode, mode, seed)
                if msg:
                    print("FAIL", tag, "->", msg)
                    failures += 1
                else:
                    print("ok  ", tag)
print("failures:", failures)
sys.exit(1 if failures else 0)
