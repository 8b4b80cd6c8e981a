"""Compiler from ASM-lite programs to anchored rewrite rule sets.

The compiled automaton realizes one interpreter transition as a fixed
cycle of focus-node colors acting as a program counter:

    boot -> s0 .. s{n-1} -> d0 .. d{m-1} -> m0 .. m{m-1} -> k0 .. -> s0
                               \\-> done (no assignment enabled)

* boot (once): create the shared true/false marker nodes.
* s{i} (eval): materialize one value into a scratch register edge
  ($r<j>) or one condition outcome into a bit edge ($b<j>, pointing at
  the true or false marker).  Register steps are wrapped in a guard
  stage when their path condition is non-trivial; bit steps always run.
* d{i} (decide): find the first assignment whose path condition holds
  and jump to its commit stage; if none holds, halt in "done".
* m{i} (commit): rewrite one critical-term edge or one function
  location from registers only, so parallel assignments all read the
  pre-transition state.
* k{i} (cleanup): drop register and bit edges, then loop to s0.

Value nodes are never deleted and committed values are never
duplicated: every constructor first scans for an existing node
(maximal sharing) and only builds one when the scan comes up empty.

Blocking between rules relies solely on the strict-subset maximality
filter.  Two conventions keep that sound under any tie-breaking order:
every rule that must suppress a smaller "exit" or fallback rule binds
the false marker as a pad cell, so its matched node set is strictly
larger even when value cells coincide; and loop rules recolor the nodes
they have handled so a loop can never re-fire on the same node.

Patterns bind cells injectively, so any template whose cells may
legitimately coincide (two operands holding the same value, an operand
that is the empty set, ...) is expanded into alias variants, one per
feasible identification of cells, quotients that would create a
containment cycle being dropped.
"""
from __future__ import annotations

import itertools

from . import asmlang as ast
from . import interpreter
from . import tangle
from .pattern import Pattern, Rewrite, Rule, RuleSet, validate_ruleset

RADIUS = 3

BOOT = "boot"
DONE = "done"
CHOICE_ERROR = "choice-error"

# protocol mark colors for value nodes
SUGG = "sugg"        # singleton suggestion under construction
TESTED = "tested"    # singleton candidate already rejected
MKU = "mku"          # union: plain candidate member found in an operand
MKUR = "mkur"        # union: rejected-candidate member found in an operand
UREJ = "urej"        # union: candidate already rejected
MKB = "mkb"          # union build: member already copied
UBUILD = "ubuild"    # union result under construction

_MARK_COLORS = (SUGG, TESTED, MKU, MKUR, UREJ, MKB, UBUILD)

# scratch edge labels shared by all protocol instances (never live
# across protocol boundaries)
SW = "$sw"       # singleton suggestion handle
CAND = "$cand"   # candidate under examination
SEED = "$seed"   # union witness member
BW = "$bw"       # union build handle
LOC = "$loc"     # resolved location tuple
TST = "$tst"     # negative-edge mode: singleton reject mark
REJ = "$rej"     # negative-edge mode: union reject mark


class CompileError(Exception):
    pass


# -- path-condition formulas -------------------------------------------

class Formula:
    """Boolean function over bit indices as an explicit truth table.

    support: sorted tuple of bit indices; rows: the satisfying
    assignments, each a tuple of booleans aligned with the support.
    """

    __slots__ = ("support", "rows")

    def __init__(self, support, rows):
        self.support = tuple(support)
        self.rows = frozenset(tuple(r) for r in rows)

    @staticmethod
    def true():
        return Formula((), {()})

    @staticmethod
    def of_bit(bit):
        return Formula((bit,), {(True,)})

    def _on(self, support):
        """Rows re-expressed over a larger support."""
        pos = {b: i for i, b in enumerate(support)}
        own = [pos[b] for b in self.support]
        out = set()
        for combo in itertools.product((False, True), repeat=len(support)):
            if tuple(combo[i] for i in own) in self.rows:
                out.add(combo)
        return out

    def negate(self):
        full = set(itertools.product((False, True), repeat=len(self.support)))
        return Formula(self.support, full - self.rows).minimize()

    def conj(self, other):
        support = tuple(sorted(set(self.support) | set(other.support)))
        return Formula(support,
                       self._on(support) & other._on(support)).minimize()

    def disj(self, other):
        support = tuple(sorted(set(self.support) | set(other.support)))
        return Formula(support,
                       self._on(support) | other._on(support)).minimize()

    def minimize(self):
        """Drop support bits the function does not depend on."""
        support = list(self.support)
        rows = set(self.rows)
        i = 0
        while i < len(support):
            flipped = {r[:i] + (not r[i],) + r[i + 1:] for r in rows}
            if flipped == rows:
                rows = {r[:i] + r[i + 1:] for r in rows}
                support.pop(i)
            else:
                i += 1
        return Formula(support, rows)

    def assignments(self):
        """All (row, satisfied) pairs; row is a tuple of (bit, bool)."""
        out = []
        for combo in itertools.product((False, True),
                                       repeat=len(self.support)):
            out.append((tuple(zip(self.support, combo)), combo in self.rows))
        return out

    def is_true(self):
        m = self.minimize()
        return not m.support and bool(m.rows)

    def is_false(self):
        return not self.rows


# -- rule emission -------------------------------------------------------

_BASE_LABELS = (tangle.ELEM, tangle.FST, tangle.SND, tangle.VAL,
                tangle.EMPTY_EDGE, tangle.TRUE_EDGE, tangle.FALSE_EDGE)
_NODE_COLORS = (tangle.PLAIN, tangle.EMPTY, tangle.MARKER,
                tangle.JUNK) + _MARK_COLORS


class EmitContext:
    """Accumulates rules plus the palette/label alphabet they use."""

    def __init__(self, negative_edges=False):
        self.negative_edges = negative_edges
        self.rules = []
        self.labels = set(_BASE_LABELS)
        self.colors = {BOOT, DONE, CHOICE_ERROR}
        self.colors.update(_NODE_COLORS)

    def emit(self, name, cells, edges, recolor=(), add=(), delete=(),
             creates=(), aliases=(), negs=()):
        """Emit a rule template, expanded into its alias variants.

        cells: [(name, color-or-None)] with the focus named "C";
        aliases: cell-name pairs that may legitimately bind one node.
        Returns the rules appended.
        """
        out = []
        for mapping, qcells, qedges, suffix in _variants(cells, edges,
                                                         aliases):
            rc = _dedupe((mapping.get(n, n), c) for n, c in recolor)
            targets = {}
            bad = False
            for n, c in rc:
                if targets.setdefault(n, c) != c:
                    bad = True  # variant recolors one node two ways
            if bad:
                continue
            qadd = _dedupe((mapping.get(a, a), l, mapping.get(b, b))
                           for a, l, b in add)
            qdel = _dedupe((mapping.get(a, a), l, mapping.get(b, b))
                           for a, l, b in delete)
            qneg = _dedupe((mapping.get(a, a), l, mapping.get(b, b))
                           for a, l, b in negs)
            rule = Rule(name + suffix, Pattern(qcells, qedges, "C"),
                        Rewrite(rc, qadd, qdel, creates), qneg)
            self.rules.append(rule)
            out.append(rule)
            for _n, c in qcells:
                if c is not None:
                    self.colors.add(c)
            for n, c in rc:
                self.colors.add(c)
            for _n, c, _k in creates:
                self.colors.add(c)
            for a, l, b in list(qedges) + qadd + qdel + qneg:
                self.labels.add(l)
        if not out:
            raise CompileError("template %s has no feasible variant" % name)
        return out

    def ruleset(self):
        return RuleSet(sorted(self.colors), sorted(self.labels),
                       self.rules, RADIUS)


def _dedupe(items):
    seen = set()
    out = []
    for it in items:
        if it not in seen:
            seen.add(it)
            out.append(it)
    return out


def _variants(cells, edges, aliases):
    """All feasible quotients of a pattern under the allowed aliases.

    Yields (mapping, cells, edges, name-suffix).  A quotient is dropped
    when merged cells demand different colors or the merged edge graph
    gains a directed cycle (well-founded values never match those).
    """
    names = [n for n, _c in cells]
    color = dict(cells)
    allowed = {frozenset(p) for p in aliases}
    pairs = sorted(allowed, key=sorted)
    seen = set()
    results = []
    for mask in range(1 << len(pairs)):
        parent = {n: n for n in names}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, pr in enumerate(pairs):
            if mask >> i & 1:
                a, b = sorted(pr)
                parent[find(b)] = find(a)
        blocks = {}
        for n in names:
            blocks.setdefault(find(n), []).append(n)
        key = frozenset(frozenset(b) for b in blocks.values())
        if key in seen:
            continue
        seen.add(key)
        # every pair inside a block must be individually allowed
        ok = all(frozenset((x, y)) in allowed
                 for blk in key if len(blk) > 1
                 for x, y in itertools.combinations(sorted(blk), 2))
        if not ok:
            continue
        mapping = {}
        qcells = []
        feasible = True
        for n in names:
            rep = find(n)
            block = blocks[rep]
            lead = min(block, key=names.index)
            mapping[n] = lead
            if n == lead:
                block_colors = {color[x] for x in block
                                if color[x] is not None}
                if len(block_colors) > 1:
                    feasible = False
                    break
                qcells.append((lead, block_colors.pop()
                               if block_colors else None))
        if not feasible:
            continue
        qedges = _dedupe((mapping[a], l, mapping[b]) for a, l, b in edges)
        if _has_cycle([n for n, _c in qcells], qedges):
            continue
        merged = sorted("=".join(sorted(b)) for b in key if len(b) > 1)
        suffix = "".join("~" + m for m in merged)
        results.append((mapping, qcells, qedges, suffix))
    return results


def _has_cycle(names, edges):
    out = {n: [] for n in names}
    for a, _l, b in edges:
        out[a].append(b)
    state = {}

    def dfs(n):
        state[n] = 1
        for m in out[n]:
            s = state.get(m)
            if s == 1 or (s is None and dfs(m)):
                return True
        state[n] = 2
        return False

    return any(state.get(n) is None and dfs(n) for n in names)


def _pad(cells, edges):
    """Bind the false marker as a pad cell, enlarging the matched node
    set so smaller exit/fallback rules stay strictly blocked."""
    return (cells + [("F", tangle.MARKER)],
            edges + [("C", tangle.FALSE_EDGE, "F")])


# -- construct emitters ----------------------------------------------------
#
# Each emitter takes the entry color, the color to hand over to, and
# register labels; every cell list names the focus "C" carrying the
# entry color of the tick the rule fires in.

def compile_conditional(ctx, entry, nxt, kind, left, right, bit):
    """Bit test: point `bit` at the true/false marker.  One tick.

    kind "member" holds iff left's value is an element of right's;
    kind "eq" holds iff both registers share a node.  The false rule is
    a fallback that also absorbs unset operand registers.
    """
    if kind == "member":
        cells = [("C", entry), ("X", None), ("S", None),
                 ("T", tangle.MARKER)]
        edges = [("C", left, "X"), ("C", right, "S"),
                 ("X", tangle.ELEM, "S"), ("C", tangle.TRUE_EDGE, "T")]
    elif kind == "eq":
        cells = [("C", entry), ("X", None), ("T", tangle.MARKER)]
        edges = [("C", left, "X"), ("C", right, "X"),
                 ("C", tangle.TRUE_EDGE, "T")]
    else:
        raise CompileError("unknown bit test %r" % kind)
    cells, edges = _pad(cells, edges)
    rules = ctx.emit("conditional:%s:true" % entry, cells, edges,
                     add=[("C", bit, "T")], recolor=[("C", nxt)])
    rules += ctx.emit("conditional:%s:false" % entry,
                      [("C", entry), ("F", tangle.MARKER)],
                      [("C", tangle.FALSE_EDGE, "F")],
                      add=[("C", bit, "F")], recolor=[("C", nxt)])
    return rules


def _row_pattern(entry, row):
    """Pattern cells/edges testing a complete assignment of bits.

    All true bits share the true-marker cell, all false bits share the
    false-marker cell; the false marker is always bound, doubling as
    the pad.
    """
    cells = [("C", entry)]
    edges = []
    if any(v for _b, v in row):
        cells.append(("T", tangle.MARKER))
        edges.append(("C", tangle.TRUE_EDGE, "T"))
    cells.append(("F", tangle.MARKER))
    edges.append(("C", tangle.FALSE_EDGE, "F"))
    for bit, v in row:
        edges.append(("C", "$b%d" % bit, "T" if v else "F"))
    return cells, edges


def compile_lock_wrapping(ctx, entry, run, skip, formula, phase="eval"):
    """Guard stage: one rule per complete truth-table row, jumping to
    `run` on satisfying rows and `skip` on falsifying ones.  Rows are
    mutually exclusive, so exactly one rule fires."""
    rules = []
    for i, (row, sat) in enumerate(formula.assignments()):
        cells, edges = _row_pattern(entry, row)
        rules += ctx.emit("%s:%s:%s%d" % (phase, entry,
                                          "sat" if sat else "skip", i),
                          cells, edges,
                          recolor=[("C", run if sat else skip)])
    return rules


def compile_choice(ctx, entry, nxt, source, dst, error_color=CHOICE_ERROR):
    """Pick any element of the source register's set.  One tick.

    Every element is a maximal match, so the random scheduler realizes
    the nondeterministic choice; the empty-set fallback halts the
    automaton in the error color.
    """
    cells, edges = _pad([("C", entry), ("S", None), ("X", None)],
                        [("C", source, "S"), ("X", tangle.ELEM, "S")])
    rules = ctx.emit("choice:%s:pick" % entry, cells, edges,
                     add=[("C", dst, "X")], recolor=[("C", nxt)])
    rules += ctx.emit("choice:%s:empty" % entry,
                      [("C", entry), ("S", None)], [("C", source, "S")],
                      recolor=[("C", error_color)])
    return rules


def compile_pairing(ctx, entry, nxt, first, second, dst):
    """Reuse the committed pair node when one exists, else create it.
    One tick either way."""
    cells, edges = _pad([("C", entry), ("X", None), ("Y", None),
                         ("P", None)],
                        [("C", first, "X"), ("C", second, "Y"),
                         ("X", tangle.FST, "P"), ("Y", tangle.SND, "P")])
    rules = ctx.emit("pairing:%s:reuse" % entry, cells, edges,
                     add=[("C", dst, "P")], recolor=[("C", nxt)],
                     aliases=[("X", "Y")])
    rules += ctx.emit("pairing:%s:create" % entry,
                      [("C", entry), ("X", None), ("Y", None)],
                      [("C", first, "X"), ("C", second, "Y")],
                      creates=[("P", tangle.PLAIN, tangle.PAIR)],
                      add=[("X", tangle.FST, "P"), ("Y", tangle.SND, "P"),
                           ("C", dst, "P")],
                      recolor=[("C", nxt)],
                      aliases=[("X", "Y")])
    return rules


def compile_apply_read(ctx, entry, nxt, fname, argregs, dst):
    """Location read: the stored value on a hit, the empty set on a
    miss.  One tick.  The miss rule binds the empty-set node both to
    deliver it and to stay a strict subset of the hit rule."""
    k = len(argregs)
    arg_cells = [("A%d" % i, None) for i in range(1, k + 1)]
    arg_edges = [("C", argregs[i - 1], "A%d" % i) for i in range(1, k + 1)]
    alias_pool = ["A%d" % i for i in range(1, k + 1)]

    cells = [("C", entry)] + arg_cells + [
        ("T", None), ("V", None), ("E", tangle.EMPTY)]
    edges = list(arg_edges) + [("C", fname, "T")]
    edges += [("T", tangle.arg_label(i), "A%d" % i) for i in range(1, k + 1)]
    edges += [("T", tangle.VAL, "V"), ("C", tangle.EMPTY_EDGE, "E")]
    cells, edges = _pad(cells, edges)
    hit_aliases = [p for p in itertools.combinations(
        alias_pool + ["V", "E"], 2)]
    rules = ctx.emit("eval:%s:hit" % entry, cells, edges,
                     add=[("C", dst, "V")], recolor=[("C", nxt)],
                     aliases=hit_aliases)

    cells = [("C", entry)] + arg_cells + [("E", tangle.EMPTY)]
    edges = list(arg_edges) + [("C", tangle.EMPTY_EDGE, "E")]
    miss_aliases = [p for p in itertools.combinations(alias_pool + ["E"], 2)]
    rules += ctx.emit("eval:%s:miss" % entry, cells, edges,
                      add=[("C", dst, "E")], recolor=[("C", nxt)],
                      aliases=miss_aliases)
    return rules


def compile_apply_write(ctx, entry, nxt, fname, argregs, src):
    """Location write: resolve the tuple node (creating it on a miss),
    unlink the old value edge, link the new one.  Three ticks."""
    k = len(argregs)
    unlink = entry + ".u"
    link = entry + ".l"
    arg_cells = [("A%d" % i, None) for i in range(1, k + 1)]
    arg_edges = [("C", argregs[i - 1], "A%d" % i) for i in range(1, k + 1)]
    tuple_edges = [("T", tangle.arg_label(i), "A%d" % i)
                   for i in range(1, k + 1)]
    aliases = [p for p in itertools.combinations(
        ["A%d" % i for i in range(1, k + 1)], 2)]

    cells, edges = _pad([("C", entry)] + arg_cells + [("T", None)],
                        arg_edges + [("C", fname, "T")] + tuple_edges)
    rules = ctx.emit("commit:%s:resolve-hit" % entry, cells, edges,
                     add=[("C", LOC, "T")], recolor=[("C", unlink)],
                     aliases=aliases)
    rules += ctx.emit("commit:%s:resolve-miss" % entry,
                      [("C", entry)] + arg_cells, arg_edges,
                      creates=[("T", tangle.PLAIN, tangle.TUPLE)],
                      add=[("C", fname, "T")] + tuple_edges
                          + [("C", LOC, "T")],
                      recolor=[("C", unlink)],
                      aliases=aliases)

    cells, edges = _pad([("C", unlink), ("T", None), ("V", None)],
                        [("C", LOC, "T"), ("T", tangle.VAL, "V")])
    rules += ctx.emit("commit:%s:unlink" % entry, cells, edges,
                      delete=[("T", tangle.VAL, "V")],
                      recolor=[("C", link)])
    rules += ctx.emit("commit:%s:unlink-skip" % entry,
                      [("C", unlink), ("T", None)], [("C", LOC, "T")],
                      recolor=[("C", link)])

    rules += ctx.emit("commit:%s:link" % entry,
                      [("C", link), ("T", None), ("X", None)],
                      [("C", LOC, "T"), ("C", src, "X")],
                      add=[("T", tangle.VAL, "X")],
                      delete=[("C", LOC, "T")],
                      recolor=[("C", nxt)])
    return rules


def compile_term_commit(ctx, entry, nxt, name, src):
    """Swing one critical-term edge to the register's node.  One tick."""
    return ctx.emit("commit:%s:term" % entry,
                    [("C", entry), ("X", None), ("Y", None)],
                    [("C", name, "X"), ("C", src, "Y")],
                    delete=[("C", name, "X")],
                    add=[("C", name, "Y")],
                    recolor=[("C", nxt)],
                    aliases=[("X", "Y")])


def compile_singleton(ctx, entry, nxt, source, dst):
    """{x}: scan the parents of x for an existing committed singleton,
    else commit a fresh suggestion node.

    A suggestion node holding x is created first, so the exit rule can
    deliver it by a single recolor.  Candidate parents are examined one
    at a time; rejected ones are marked (recolored, or flagged with a
    scratch edge in negative-edge mode) so the pick loop terminates,
    and all marks are undone in the restore stage.
    """
    neg = ctx.negative_edges
    pick = entry + ".p"
    check = entry + ".c"
    restore = entry + ".t"

    rules = ctx.emit("singleton:%s:suggest" % entry,
                     [("C", entry), ("X", None)], [("C", source, "X")],
                     creates=[("W", SUGG, tangle.SET)],
                     add=[("X", tangle.ELEM, "W"), ("C", SW, "W")],
                     recolor=[("C", pick)])

    cells, edges = _pad(
        [("C", pick), ("X", None), ("U", tangle.PLAIN), ("W", SUGG)],
        [("C", source, "X"), ("X", tangle.ELEM, "U"), ("C", SW, "W")])
    rules += ctx.emit("singleton:%s:pick" % entry, cells, edges,
                      add=[("C", CAND, "U")], recolor=[("C", check)],
                      negs=[("U", TST, "W")] if neg else ())
    rules += ctx.emit("singleton:%s:exit" % entry,
                      [("C", pick), ("X", None), ("W", SUGG)],
                      [("C", source, "X"), ("C", SW, "W")],
                      add=[("C", dst, "W")],
                      recolor=[("W", tangle.PLAIN), ("C", restore)])

    rules += ctx.emit("singleton:%s:accept" % entry,
                      [("C", check), ("X", None), ("U", tangle.PLAIN),
                       ("W", SUGG)],
                      [("C", source, "X"), ("C", CAND, "U"),
                       ("X", tangle.ELEM, "U"), ("C", SW, "W")],
                      add=[("C", dst, "U")],
                      delete=[("C", CAND, "U"), ("X", tangle.ELEM, "W")],
                      recolor=[("W", tangle.JUNK), ("C", restore)])
    cells, edges = _pad(
        [("C", check), ("X", None), ("U", tangle.PLAIN), ("W", SUGG),
         ("Y", None)],
        [("C", source, "X"), ("C", CAND, "U"), ("X", tangle.ELEM, "U"),
         ("C", SW, "W"), ("Y", tangle.ELEM, "U")])
    reject_edits = dict(delete=[("C", CAND, "U")], recolor=[("C", pick)])
    if neg:
        reject_edits["add"] = [("U", TST, "W")]
    else:
        reject_edits["recolor"].append(("U", TESTED))
    rules += ctx.emit("singleton:%s:reject" % entry, cells, edges,
                      **reject_edits)

    if neg:
        cells, edges = _pad(
            [("C", restore), ("X", None), ("W", None), ("U", None)],
            [("C", source, "X"), ("C", SW, "W"), ("U", TST, "W")])
        rules += ctx.emit("singleton:%s:restore" % entry, cells, edges,
                          delete=[("U", TST, "W")])
    else:
        cells, edges = _pad(
            [("C", restore), ("X", None), ("U", TESTED), ("W", None)],
            [("C", source, "X"), ("X", tangle.ELEM, "U"), ("C", SW, "W")])
        rules += ctx.emit("singleton:%s:restore" % entry, cells, edges,
                          recolor=[("U", tangle.PLAIN)])
    rules += ctx.emit("singleton:%s:restore-exit" % entry,
                      [("C", restore), ("X", None), ("W", None)],
                      [("C", source, "X"), ("C", SW, "W")],
                      delete=[("C", SW, "W")],
                      recolor=[("C", nxt)])
    return rules


def compile_union(ctx, entry, nxt, first, second, dst):
    """first U second: find the committed union node or build it.

    Dispatch handles x U x and empty operands in one tick.  Otherwise a
    witness member of the first operand is picked; every committed node
    that might equal the union must contain the witness, so scanning
    the witness's parents is exhaustive.  Each candidate is checked by
    marking its members that occur in an operand, then testing the
    three inclusions; the empty set, which marking by recolor cannot
    touch, gets its own one-tick membership stages where absence is
    detected by strictly larger presence rules staying unmatched.

    Without negative edges, rejected candidates are recolored, and a
    rejected candidate may itself be a member of an operand or of a
    later candidate, so every member scan runs in two variants (plain
    and rejected, with separate mark colors restoring to the original);
    all reject marks are dropped before the build phase copies members.
    """
    neg = ctx.negative_edges
    seed = entry + ".s"
    pick = entry + ".p"
    mark = entry + ".k1"
    sube = entry + ".k2e"   # empty-set member of U must be in an operand
    sub = entry + ".k2"     # U subset of union of operands
    supae = entry + ".k3e"  # empty set in first operand must be in U
    supa = entry + ".k3"    # first operand subset of U
    supbe = entry + ".k4e"
    supb = entry + ".k4"
    acc = entry + ".k5"
    unmark_a = entry + ".g"
    unmark_j = entry + ".j"
    rej_done = entry + ".j2"
    prebuild = entry + ".tb"
    build = entry + ".w"
    cpea = entry + ".wa0"
    cpa = entry + ".wa"
    cpeb = entry + ".wb0"
    cpb = entry + ".wb"
    unmark_b = entry + ".wu"
    restore = entry + ".t"

    # member scans run once per color a scanned node may be in; with
    # negative edges rejected candidates stay plain, so one pass does
    scans = ((tangle.PLAIN, MKU, ""),) if neg else (
        (tangle.PLAIN, MKU, ""), (UREJ, MKUR, "-rej"))

    rules = []

    # dispatch: same node, or an empty operand, in one tick
    cells, edges = _pad([("C", entry), ("X", None)],
                        [("C", first, "X"), ("C", second, "X")])
    rules += ctx.emit("union-check:%s:same" % entry, cells, edges,
                      add=[("C", dst, "X")], recolor=[("C", nxt)])
    cells, edges = _pad([("C", entry), ("E", tangle.EMPTY), ("Y", None)],
                        [("C", first, "E"), ("C", second, "Y")])
    rules += ctx.emit("union-check:%s:left-empty" % entry, cells, edges,
                      add=[("C", dst, "Y")], recolor=[("C", nxt)])
    cells, edges = _pad([("C", entry), ("X", None), ("E", tangle.EMPTY)],
                        [("C", first, "X"), ("C", second, "E")])
    rules += ctx.emit("union-check:%s:right-empty" % entry, cells, edges,
                      add=[("C", dst, "X")], recolor=[("C", nxt)])
    rules += ctx.emit("union-check:%s:general" % entry,
                      [("C", entry)], [], recolor=[("C", seed)])

    # witness member of the first operand
    rules += ctx.emit("union-check:%s:seed" % entry,
                      [("C", seed), ("S", None), ("M", None)],
                      [("C", first, "S"), ("M", tangle.ELEM, "S")],
                      add=[("C", SEED, "M")], recolor=[("C", pick)])

    # candidate loop over the witness's parents
    cells, edges = _pad([("C", pick), ("M", None), ("U", tangle.PLAIN)],
                        [("C", SEED, "M"), ("M", tangle.ELEM, "U")])
    rules += ctx.emit("union-check:%s:pick" % entry, cells, edges,
                      add=[("C", CAND, "U")], recolor=[("C", mark)],
                      negs=[("U", REJ, "M")] if neg else ())
    rules += ctx.emit("union-check:%s:pick-exit" % entry,
                      [("C", pick), ("M", None)], [("C", SEED, "M")],
                      recolor=[("C", prebuild)])

    # mark candidate members occurring in an operand
    for tag, reg in (("a", first), ("b", second)):
        for scol, mcol, stag in scans:
            cells, edges = _pad(
                [("C", mark), ("S", None), ("U", tangle.PLAIN),
                 ("X", scol)],
                [("C", reg, "S"), ("C", CAND, "U"),
                 ("X", tangle.ELEM, "S"), ("X", tangle.ELEM, "U")])
            rules += ctx.emit("union-check:%s:mark-%s%s"
                              % (entry, tag, stag),
                              cells, edges, recolor=[("X", mcol)],
                              aliases=[("S", "U")])
    rules += ctx.emit("union-check:%s:mark-exit" % entry,
                      [("C", mark), ("U", tangle.PLAIN)],
                      [("C", CAND, "U")],
                      recolor=[("C", sube)])

    # empty-set membership stages: a presence rule strictly contains
    # the reject/continue fallbacks, so an unmatched presence rule
    # means absence
    for tag, reg in (("a", first), ("b", second)):
        cells, edges = _pad(
            [("C", sube), ("U", tangle.PLAIN), ("E", tangle.EMPTY),
             ("S", None)],
            [("C", CAND, "U"), ("C", tangle.EMPTY_EDGE, "E"),
             ("E", tangle.ELEM, "U"), ("C", reg, "S"),
             ("E", tangle.ELEM, "S")])
        rules += ctx.emit("union-check:%s:sub-empty-in-%s" % (entry, tag),
                          cells, edges, recolor=[("C", sub)],
                          aliases=[("S", "U")])
    rules += ctx.emit("union-check:%s:sub-empty-reject" % entry,
                      [("C", sube), ("U", tangle.PLAIN),
                       ("E", tangle.EMPTY)],
                      [("C", CAND, "U"), ("C", tangle.EMPTY_EDGE, "E"),
                       ("E", tangle.ELEM, "U")],
                      recolor=[("C", unmark_j)])
    rules += ctx.emit("union-check:%s:sub-empty-pass" % entry,
                      [("C", sube), ("U", tangle.PLAIN)],
                      [("C", CAND, "U")],
                      recolor=[("C", sub)])

    # any unmarked member of the candidate is outside both operands
    for scol, _mcol, stag in scans:
        cells, edges = _pad(
            [("C", sub), ("U", tangle.PLAIN), ("X", scol)],
            [("C", CAND, "U"), ("X", tangle.ELEM, "U")])
        rules += ctx.emit("union-check:%s:sub-reject%s" % (entry, stag),
                          cells, edges, recolor=[("C", unmark_j)])
    rules += ctx.emit("union-check:%s:sub-pass" % entry,
                      [("C", sub), ("U", tangle.PLAIN)],
                      [("C", CAND, "U")],
                      recolor=[("C", supae)])

    # operand-inclusion stages: empty-set membership first, then the
    # remaining members (marked iff they are also candidate members)
    for ecolor, scolor, reg, tag in ((supae, supa, first, "a"),
                                     (supbe, supb, second, "b")):
        cells, edges = _pad(
            [("C", ecolor), ("S", None), ("E", tangle.EMPTY),
             ("U", tangle.PLAIN)],
            [("C", reg, "S"), ("C", tangle.EMPTY_EDGE, "E"),
             ("E", tangle.ELEM, "S"), ("C", CAND, "U"),
             ("E", tangle.ELEM, "U")])
        rules += ctx.emit("union-check:%s:sup-%s-empty-in" % (entry, tag),
                          cells, edges, recolor=[("C", scolor)],
                          aliases=[("S", "U")])
        rules += ctx.emit("union-check:%s:sup-%s-empty-reject"
                          % (entry, tag),
                          [("C", ecolor), ("S", None),
                           ("E", tangle.EMPTY)],
                          [("C", reg, "S"), ("C", tangle.EMPTY_EDGE, "E"),
                           ("E", tangle.ELEM, "S")],
                          recolor=[("C", unmark_j)])
        rules += ctx.emit("union-check:%s:sup-%s-empty-pass"
                          % (entry, tag),
                          [("C", ecolor), ("S", None)],
                          [("C", reg, "S")],
                          recolor=[("C", scolor)])
        nxt_color = supbe if tag == "a" else acc
        for scol, _mcol, stag in scans:
            cells, edges = _pad(
                [("C", scolor), ("S", None), ("X", scol)],
                [("C", reg, "S"), ("X", tangle.ELEM, "S")])
            rules += ctx.emit("union-check:%s:sup-%s-reject%s"
                              % (entry, tag, stag),
                              cells, edges, recolor=[("C", unmark_j)])
        rules += ctx.emit("union-check:%s:sup-%s-pass" % (entry, tag),
                          [("C", scolor), ("S", None)],
                          [("C", reg, "S")],
                          recolor=[("C", nxt_color)])

    # accept: deliver the candidate, unmark its members, restore
    rules += ctx.emit("union-check:%s:accept" % entry,
                      [("C", acc), ("U", tangle.PLAIN)],
                      [("C", CAND, "U")],
                      add=[("C", dst, "U")],
                      delete=[("C", CAND, "U")],
                      recolor=[("C", unmark_a)])
    for scol, mcol, stag in scans:
        cells, edges = _pad(
            [("C", unmark_a), ("U", tangle.PLAIN), ("X", mcol)],
            [("C", dst, "U"), ("X", tangle.ELEM, "U")])
        rules += ctx.emit("union-check:%s:accept-unmark%s"
                          % (entry, stag),
                          cells, edges, recolor=[("X", scol)])
    rules += ctx.emit("union-check:%s:accept-unmark-exit" % entry,
                      [("C", unmark_a), ("U", tangle.PLAIN)],
                      [("C", dst, "U")],
                      recolor=[("C", restore)])

    # reject: unmark this candidate's members, flag it, resume the loop
    for scol, mcol, stag in scans:
        cells, edges = _pad(
            [("C", unmark_j), ("U", tangle.PLAIN), ("X", mcol)],
            [("C", CAND, "U"), ("X", tangle.ELEM, "U")])
        rules += ctx.emit("union-check:%s:reject-unmark%s"
                          % (entry, stag),
                          cells, edges, recolor=[("X", scol)])
    rules += ctx.emit("union-check:%s:reject-unmark-exit" % entry,
                      [("C", unmark_j), ("U", tangle.PLAIN)],
                      [("C", CAND, "U")],
                      recolor=[("C", rej_done)])
    if neg:
        rules += ctx.emit("union-check:%s:reject-flag" % entry,
                          [("C", rej_done), ("U", tangle.PLAIN),
                           ("M", None)],
                          [("C", CAND, "U"), ("C", SEED, "M")],
                          add=[("U", REJ, "M")],
                          delete=[("C", CAND, "U")],
                          recolor=[("C", pick)])
    else:
        rules += ctx.emit("union-check:%s:reject-flag" % entry,
                          [("C", rej_done), ("U", tangle.PLAIN)],
                          [("C", CAND, "U")],
                          delete=[("C", CAND, "U")],
                          recolor=[("U", UREJ), ("C", pick)])

    # all candidates rejected: drop the reject marks first, so the
    # build phase sees every operand member as plain, then build
    _emit_union_restore(ctx, entry, prebuild, build, "prebuild-restore",
                        release_seed=True)
    rules += ctx.emit("union-build:%s:fresh" % entry,
                      [("C", build)], [],
                      creates=[("W", UBUILD, tangle.SET)],
                      add=[("C", BW, "W")],
                      recolor=[("C", cpea)])
    for ecolor, ccolor, after, reg, tag in (
            (cpea, cpa, cpeb, first, "a"),
            (cpeb, cpb, unmark_b, second, "b")):
        cells, edges = _pad(
            [("C", ecolor), ("S", None), ("E", tangle.EMPTY),
             ("W", UBUILD)],
            [("C", reg, "S"), ("C", tangle.EMPTY_EDGE, "E"),
             ("E", tangle.ELEM, "S"), ("C", BW, "W")])
        rules += ctx.emit("union-build:%s:copy-%s-empty" % (entry, tag),
                          cells, edges,
                          add=[("E", tangle.ELEM, "W")],
                          recolor=[("C", ccolor)])
        rules += ctx.emit("union-build:%s:copy-%s-empty-skip"
                          % (entry, tag),
                          [("C", ecolor)], [],
                          recolor=[("C", ccolor)])
        cells, edges = _pad(
            [("C", ccolor), ("S", None), ("W", UBUILD),
             ("X", tangle.PLAIN)],
            [("C", reg, "S"), ("C", BW, "W"), ("X", tangle.ELEM, "S")])
        rules += ctx.emit("union-build:%s:copy-%s" % (entry, tag),
                          cells, edges,
                          add=[("X", tangle.ELEM, "W")],
                          recolor=[("X", MKB)])
        rules += ctx.emit("union-build:%s:copy-%s-exit" % (entry, tag),
                          [("C", ccolor), ("S", None), ("W", UBUILD)],
                          [("C", reg, "S"), ("C", BW, "W")],
                          recolor=[("C", after)])
    cells, edges = _pad(
        [("C", unmark_b), ("W", UBUILD), ("X", MKB)],
        [("C", BW, "W"), ("X", tangle.ELEM, "W")])
    rules += ctx.emit("union-build:%s:unmark" % entry, cells, edges,
                      recolor=[("X", tangle.PLAIN)])
    rules += ctx.emit("union-build:%s:unmark-exit" % entry,
                      [("C", unmark_b), ("W", UBUILD)],
                      [("C", BW, "W")],
                      add=[("C", dst, "W")],
                      delete=[("C", BW, "W")],
                      recolor=[("W", tangle.PLAIN), ("C", nxt)])

    # accept path: restore rejected candidates, release the witness
    _emit_union_restore(ctx, entry, restore, nxt, "restore",
                        release_seed=True)
    return rules


def _emit_union_restore(ctx, entry, stage, after, label, release_seed):
    """Loop stripping every reject mark, then step to `after`."""
    if ctx.negative_edges:
        cells, edges = _pad(
            [("C", stage), ("M", None), ("U", None)],
            [("C", SEED, "M"), ("U", REJ, "M")])
        ctx.emit("union-check:%s:%s" % (entry, label), cells, edges,
                 delete=[("U", REJ, "M")])
    else:
        cells, edges = _pad(
            [("C", stage), ("M", None), ("U", UREJ)],
            [("C", SEED, "M"), ("M", tangle.ELEM, "U")])
        ctx.emit("union-check:%s:%s" % (entry, label), cells, edges,
                 recolor=[("U", tangle.PLAIN)])
    exit_edits = dict(recolor=[("C", after)])
    if release_seed:
        exit_edits["delete"] = [("C", SEED, "M")]
    ctx.emit("union-check:%s:%s-exit" % (entry, label),
             [("C", stage), ("M", None)], [("C", SEED, "M")],
             **exit_edits)


# -- program lowering ------------------------------------------------------

class _Step:
    """One eval-phase operation producing a register or a bit."""

    __slots__ = ("kind", "dst", "args", "context")

    def __init__(self, kind, dst, args, context):
        self.kind = kind
        self.dst = dst
        self.args = args
        self.context = context


class _Commit:
    __slots__ = ("context", "kind", "target", "argregs", "src")

    def __init__(self, context, kind, target, argregs, src):
        self.context = context
        self.kind = kind
        self.target = target
        self.argregs = argregs
        self.src = src


class _Lowerer:
    def __init__(self, program):
        self.program = program
        self.atoms = set(program.atoms)
        self.criticals = set(program.criticals)
        self.steps = []
        self.commits = []
        self.nreg = 0
        self.nbit = 0

    def reg(self):
        r = "$r%d" % self.nreg
        self.nreg += 1
        return r

    def bit(self):
        b = self.nbit
        self.nbit += 1
        return b

    def term(self, t, env, ctx):
        """Lower a term to the register holding its value."""
        if isinstance(t, ast.Name):
            if t.id in env:
                return env[t.id]
            dst = self.reg()
            if t.id in self.criticals:
                self.steps.append(_Step("copy", dst, (t.id,), ctx))
            else:
                self.steps.append(_Step("atom", dst, (t.id,), ctx))
            return dst
        if isinstance(t, ast.EmptySet):
            dst = self.reg()
            self.steps.append(_Step("empty", dst, (), ctx))
            return dst
        if isinstance(t, ast.Singleton):
            item = self.term(t.item, env, ctx)
            dst = self.reg()
            self.steps.append(_Step("singleton", dst, (item,), ctx))
            return dst
        if isinstance(t, ast.UnionTerm):
            left = self.term(t.left, env, ctx)
            right = self.term(t.right, env, ctx)
            dst = self.reg()
            self.steps.append(_Step("union", dst, (left, right), ctx))
            return dst
        if isinstance(t, ast.PairTerm):
            first = self.term(t.first, env, ctx)
            second = self.term(t.second, env, ctx)
            dst = self.reg()
            self.steps.append(_Step("pair", dst, (first, second), ctx))
            return dst
        if isinstance(t, ast.Apply):
            args = tuple(self.term(a, env, ctx) for a in t.args)
            dst = self.reg()
            self.steps.append(_Step("apply", dst, (t.func,) + args, ctx))
            return dst
        raise CompileError("cannot lower term %r" % (t,))

    def cond(self, c, env, ctx):
        """Lower a condition to a formula over bits; bit-producing
        steps run unguarded (their false fallback absorbs operands
        that a false outer guard left unset)."""
        if isinstance(c, (ast.Member, ast.Eq, ast.Ne)):
            left = self.term(c.left, env, ctx)
            right = self.term(c.right, env, ctx)
            bit = self.bit()
            kind = "member" if isinstance(c, ast.Member) else "eq"
            self.steps.append(_Step("bit-" + kind, bit, (left, right),
                                    Formula.true()))
            f = Formula.of_bit(bit)
            return f.negate() if isinstance(c, ast.Ne) else f
        if isinstance(c, ast.And):
            return self.cond(c.left, env, ctx).conj(
                self.cond(c.right, env, ctx))
        if isinstance(c, ast.Or):
            return self.cond(c.left, env, ctx).disj(
                self.cond(c.right, env, ctx))
        if isinstance(c, ast.Not):
            return self.cond(c.item, env, ctx).negate()
        raise CompileError("cannot lower condition %r" % (c,))

    def stmt(self, s, env, ctx):
        if isinstance(s, ast.Assign):
            if isinstance(s.lhs, ast.Name):
                src = self.term(s.rhs, env, ctx)
                self.commits.append(_Commit(ctx, "term", s.lhs.id, (), src))
            else:
                argregs = tuple(self.term(a, env, ctx)
                                for a in s.lhs.args)
                src = self.term(s.rhs, env, ctx)
                self.commits.append(_Commit(ctx, "loc", s.lhs.func,
                                            argregs, src))
        elif isinstance(s, ast.If):
            f = self.cond(s.cond, env, ctx)
            self.stmt(s.then, env, ctx.conj(f))
            if s.els is not None:
                self.stmt(s.els, env, ctx.conj(f.negate()))
        elif isinstance(s, ast.Let):
            src = self.term(s.source, env, ctx)
            if s.choice:
                dst = self.reg()
                self.steps.append(_Step("choose", dst, (src,), ctx))
                src = dst
            self.stmt(s.body, env | {s.var: src}, ctx)
        elif isinstance(s, ast.Par):
            for item in s.items:
                self.stmt(item, env, ctx)
        else:
            raise CompileError("cannot lower statement %r" % (s,))


_STEP_PHASE = {"copy": "eval", "atom": "eval", "empty": "eval",
               "apply": "eval", "singleton": "singleton", "union": "union-check",
               "pair": "pairing", "choose": "choice",
               "bit-member": "conditional", "bit-eq": "conditional"}


class CompilationUnit:
    """A compiled program: the rule set plus everything needed to run
    it against encoded states and read answers back out."""

    def __init__(self, program, ruleset, negative_edges, registers, bits,
                 first_color, idle_colors):
        self.program = program
        self.ruleset = ruleset
        self.negative_edges = negative_edges
        self.registers = registers
        self.bits = bits
        self.start_color = BOOT
        self.first_color = first_color
        self.done_color = DONE
        self.error_color = CHOICE_ERROR
        self.idle_colors = idle_colors

    def initial_graph(self, state, universe):
        """Encode a state with the focus already carrying the boot
        color; unmentioned criticals default to the empty set and all
        declared atoms are pre-created."""
        full = interpreter.initial_state(self.program, state, universe)
        locs = {}
        for (fname, _uids), (args, value) in full.locations.items():
            locs[(fname, args)] = value
        return tangle.encode(full.values, locations=locs, universe=universe,
                             criticals_color=BOOT,
                             atoms=self.program.atoms)

    def classify(self, graph):
        """Outcome by the color the focus halted in."""
        color = graph.color_of(graph.active)
        if color == DONE:
            return interpreter.TERMINAL
        if color == CHOICE_ERROR:
            return interpreter.EMPTY_CHOICE
        return "stuck:" + color

    def final_state(self, graph, universe):
        values = tangle.decode(graph, universe)
        state = interpreter.State(values)
        for (fname, args), value in tangle.decode_locations(
                graph, universe).items():
            state.write_location(fname, args, value)
        return state


def compile_program(program, negative_edges=False):
    violations = ast.validate(program)
    if violations:
        raise CompileError("; ".join(violations))
    lo = _Lowerer(program)
    lo.stmt(program.body, {}, Formula.true())
    if not lo.commits:
        raise CompileError("program has no assignment")

    ctx = EmitContext(negative_edges)
    steps = lo.steps
    commits = lo.commits
    step_colors = ["s%d" % i for i in range(len(steps))]
    decide_colors = ["d%d" % i for i in range(len(commits))]
    commit_colors = ["m%d" % i for i in range(len(commits))]
    clean_targets = (["$r%d" % i for i in range(lo.nreg)]
                     + ["$b%d" % i for i in range(lo.nbit)])
    clean_colors = ["k%d" % i for i in range(len(clean_targets))]
    wind_colors = ["f%d" % i for i in range(len(clean_targets))]
    halt = wind_colors[0] if clean_targets else DONE
    first = step_colors[0] if steps else decide_colors[0]

    # boot: create the shared true/false markers, then start evaluating
    ctx.emit("boot:start",
             [("C", BOOT)], [],
             creates=[("T", tangle.MARKER, tangle.SCRATCH),
                      ("F", tangle.MARKER, tangle.SCRATCH)],
             add=[("C", tangle.TRUE_EDGE, "T"),
                  ("C", tangle.FALSE_EDGE, "F")],
             recolor=[("C", first)])

    for i, step in enumerate(steps):
        entry = step_colors[i]
        nxt = step_colors[i + 1] if i + 1 < len(steps) else decide_colors[0]
        phase = _STEP_PHASE[step.kind]
        context = step.context.minimize()
        if context.is_true():
            run = entry
        else:
            run = entry + ".r"
            compile_lock_wrapping(ctx, entry, run, nxt, context, phase)
        if step.kind == "copy":
            ctx.emit("eval:%s:copy" % run,
                     [("C", run), ("X", None)],
                     [("C", step.args[0], "X")],
                     add=[("C", step.dst, "X")], recolor=[("C", nxt)])
        elif step.kind == "atom":
            ctx.emit("eval:%s:atom" % run,
                     [("C", run), ("X", None)],
                     [("C", tangle.atom_edge(step.args[0]), "X")],
                     add=[("C", step.dst, "X")], recolor=[("C", nxt)])
        elif step.kind == "empty":
            ctx.emit("eval:%s:empty" % run,
                     [("C", run), ("E", tangle.EMPTY)],
                     [("C", tangle.EMPTY_EDGE, "E")],
                     add=[("C", step.dst, "E")], recolor=[("C", nxt)])
        elif step.kind == "apply":
            compile_apply_read(ctx, run, nxt, step.args[0],
                               list(step.args[1:]), step.dst)
        elif step.kind == "singleton":
            compile_singleton(ctx, run, nxt, step.args[0], step.dst)
        elif step.kind == "union":
            compile_union(ctx, run, nxt, step.args[0], step.args[1],
                          step.dst)
        elif step.kind == "pair":
            compile_pairing(ctx, run, nxt, step.args[0], step.args[1],
                            step.dst)
        elif step.kind == "choose":
            compile_choice(ctx, run, nxt, step.args[0], step.dst)
        elif step.kind in ("bit-member", "bit-eq"):
            compile_conditional(ctx, run, nxt, step.kind[4:],
                                step.args[0], step.args[1],
                                "$b%d" % step.dst)
        else:
            raise CompileError("unknown step kind %r" % step.kind)

    # decide: jump to the first enabled commit, or wind down and halt
    for i, commit in enumerate(commits):
        entry = decide_colors[i]
        give_up = decide_colors[i + 1] if i + 1 < len(commits) else halt
        for j, (row, sat) in enumerate(
                commit.context.minimize().assignments()):
            if not sat:
                continue
            cells, edges = _row_pattern(entry, row)
            ctx.emit("decide:%s:fire%d" % (entry, j), cells, edges,
                     recolor=[("C", commit_colors[i])])
        ctx.emit("decide:%s:pass" % entry, [("C", entry)], [],
                 recolor=[("C", give_up)])

    # commit chain: every enabled assignment applies, in program order
    for i, commit in enumerate(commits):
        entry = commit_colors[i]
        nxt = (commit_colors[i + 1] if i + 1 < len(commits)
               else (clean_colors[0] if clean_colors else first))
        context = commit.context.minimize()
        if context.is_true():
            run = entry
        else:
            run = entry + ".r"
            compile_lock_wrapping(ctx, entry, run, nxt, context, "commit")
        if commit.kind == "term":
            compile_term_commit(ctx, run, nxt, commit.target, commit.src)
        else:
            compile_apply_write(ctx, run, nxt, commit.target,
                                list(commit.argregs), commit.src)

    # cleanup: strip register and bit edges, then start the next round;
    # the wind-down twin strips them before halting instead
    def emit_clean_chain(colors, after):
        for j, label in enumerate(clean_targets):
            entry = colors[j]
            nxt = colors[j + 1] if j + 1 < len(clean_targets) else after
            is_bit = label.startswith("$b")
            cells, edges = _pad([("C", entry), ("X", None)],
                                [("C", label, "X")])
            ctx.emit("cleanup:%s:drop" % entry, cells, edges,
                     delete=[("C", label, "X")], recolor=[("C", nxt)],
                     aliases=[("X", "F")] if is_bit else ())
            ctx.emit("cleanup:%s:skip" % entry, [("C", entry)], [],
                     recolor=[("C", nxt)])

    emit_clean_chain(clean_colors, first)
    emit_clean_chain(wind_colors, DONE)

    for name in program.atoms:
        ctx.labels.add(tangle.atom_edge(name))
    for name in program.criticals:
        ctx.labels.add(name)
    for fname, arity in program.functions:
        ctx.labels.add(fname)
        for i in range(1, arity + 1):
            ctx.labels.add(tangle.arg_label(i))

    ruleset = ctx.ruleset()
    problems = validate_ruleset(ruleset, negative_edges=negative_edges)
    if problems:
        raise CompileError("generated rule set is invalid: "
                           + "; ".join(problems[:5]))
    idle = frozenset((BOOT, first, DONE, CHOICE_ERROR))
    return CompilationUnit(program, ruleset, negative_edges,
                           ["$r%d" % i for i in range(lo.nreg)],
                           ["$b%d" % i for i in range(lo.nbit)],
                           first, idle)
