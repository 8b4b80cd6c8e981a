"""Transition rules: neighborhood patterns, rewrites, matching, precedence.

A pattern is a small connected graph of cells anchored at a focus cell;
a match binds cells injectively to tangle nodes, the focus to the active
node.  The maximality filter drops any match whose cell set is a strict
subset of another match's cell set; equal cell sets survive together.
"""
from __future__ import annotations

from . import kernel


class RuleError(Exception):
    pass


WILDCARD = None


class Pattern:
    """cells: ordered (name, color-or-None); edges: (src, label, dst)."""

    def __init__(self, cells, edges, focus):
        self.cells = list(cells)
        self.edges = [tuple(e) for e in edges]
        self.focus = focus
        self.names = [c[0] for c in self.cells]
        self.index = {n: i for i, n in enumerate(self.names)}
        if focus not in self.index:
            raise RuleError("focus %r is not a pattern cell" % focus)

    def color_of(self, name):
        return self.cells[self.index[name]][1]

    def radius(self):
        """Max undirected hop distance from focus along pattern edges."""
        adj = {n: set() for n in self.names}
        for a, _l, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        dist = {self.focus: 0}
        frontier = [self.focus]
        while frontier:
            nxt = []
            for n in frontier:
                for m in adj[n]:
                    if m not in dist:
                        dist[m] = dist[n] + 1
                        nxt.append(m)
            frontier = nxt
        if len(dist) != len(self.names):
            return None  # disconnected
        return max(dist.values()) if dist else 0

    def has_directed_cycle(self):
        out = {n: [] for n in self.names}
        for a, _l, b in self.edges:
            out[a].append(b)
        state = {}

        def dfs(n):
            state[n] = 1
            for m in out[n]:
                s = state.get(m)
                if s == 1:
                    return True
                if s is None and dfs(m):
                    return True
            state[n] = 2
            return False

        return any(state.get(n) is None and dfs(n) for n in self.names)


class Rewrite:
    """Edits over the matched cells; created cells get fresh node ids.

    The right side is expressed directly over left-side cell names, so
    the left-to-right correspondence is the identity on pattern cells
    plus the created fresh names.
    """

    def __init__(self, recolor=(), add_edges=(), del_edges=(), creates=()):
        self.recolor = [tuple(r) for r in recolor]
        self.add_edges = [tuple(e) for e in add_edges]
        self.del_edges = [tuple(e) for e in del_edges]
        self.creates = [tuple(c) for c in creates]  # (name, color, kind)


class Rule:
    def __init__(self, name, pattern, rewrite, neg_edges=()):
        self.name = name
        self.pattern = pattern
        self.rewrite = rewrite
        self.neg_edges = [tuple(e) for e in neg_edges]

    def phase(self):
        return self.name.split(":", 1)[0]


class Match:
    __slots__ = ("rule", "rule_index", "binding", "cellset")

    def __init__(self, rule, rule_index, binding):
        self.rule = rule
        self.rule_index = rule_index
        self.binding = binding
        self.cellset = frozenset(binding.values())

    def binding_tuple(self):
        return tuple(self.binding[n] for n in self.rule.pattern.names)

    def __repr__(self):
        return "Match(%s, %r)" % (self.rule.name, self.binding)


class RuleSet:
    def __init__(self, palette, labels, rules, radius):
        self.palette = set(palette)
        self.labels = set(labels)
        self.rules = list(rules)
        self.radius = radius
        self._plans = None

    def plans(self):
        if self._plans is None:
            self._plans = kernel.PlanIndex(
                [make_plan(r, i) for i, r in enumerate(self.rules)])
        return self._plans


def make_plan(rule, rule_index):
    """Join plan: bind focus first, then grow along pattern edges.

    Each step binds one new cell from the adjacency of an already-bound
    cell; remaining edges between bound cells become check constraints.
    """
    p = rule.pattern
    n = len(p.cells)
    colors = [p.color_of(name) for name in p.names]
    focus = p.index[p.focus]
    edges = [(p.index[a], l, p.index[b]) for a, l, b in p.edges]
    bound = {focus}
    steps = []
    consumed = set()
    while len(bound) < n:
        step = None
        for i, (a, l, b) in enumerate(edges):
            if i in consumed:
                continue
            if a in bound and b not in bound:
                step = (b, a, l, True)   # new cell is the edge target
            elif b in bound and a not in bound:
                step = (a, b, l, False)  # new cell is the edge source
            if step is not None:
                consumed.add(i)
                break
        if step is None:
            raise RuleError("pattern of %s is disconnected" % rule.name)
        bound.add(step[0])
        steps.append(step)
    checks = [e for i, e in enumerate(edges) if i not in consumed]
    neg = [(p.index[a], l, p.index[b]) for a, l, b in rule.neg_edges]
    return kernel.Plan(rule_index, n, colors, focus, steps, checks, neg)


def match_all(g, ruleset, negative_edges=False):
    """Every match of every rule anchored at the active node.

    Deterministic order: rule order, then sorted binding tuples.
    """
    out = []
    for rule_index, binding_tuple in kernel.enumerate_matches(
            ruleset.plans(), g, g.active, negative_edges):
        rule = ruleset.rules[rule_index]
        binding = dict(zip(rule.pattern.names, binding_tuple))
        out.append(Match(rule, rule_index, binding))
    return out


def maximality_filter(matches):
    """Drop matches whose cell set is a strict subset of another's."""
    out = []
    for m in matches:
        blocked = False
        for other in matches:
            if other is m:
                continue
            if m.cellset < other.cellset:
                blocked = True
                break
        if not blocked:
            out.append(m)
    return out


def apply(g, m):
    """Apply one match's rewrite in place; returns created node ids.

    Raises RuleError on a stale match (binding no longer valid), which
    signals a scheduler bug rather than a rule-set property.
    """
    rule = m.rule
    p = rule.pattern
    b = dict(m.binding)
    for name in p.names:
        nid = b[name]
        if nid not in g.nodes:
            raise RuleError("stale match: node %d is gone" % nid)
        want = p.color_of(name)
        if want is not None and g.color_of(nid) != want:
            raise RuleError("stale match: %s changed color" % name)
    for a, l, d in p.edges:
        if not g.has_edge(b[a], l, b[d]):
            raise RuleError("stale match: edge %s-%s->%s missing" % (a, l, d))
    created = []
    for name, color, kind in rule.rewrite.creates:
        if name in b:
            raise RuleError("created cell %s collides" % name)
        b[name] = g.add_node(color, kind)
        created.append(b[name])
    for a, l, d in rule.rewrite.del_edges:
        g.remove_edge(b[a], l, b[d])
    for a, l, d in rule.rewrite.add_edges:
        g.add_edge(b[a], l, b[d])
    for name, color in rule.rewrite.recolor:
        g.set_color(b[name], color)
    return created


def validate_ruleset(ruleset, negative_edges=False):
    """Structural violations across all rules; empty list iff valid."""
    violations = []
    seen_names = set()
    for rule in ruleset.rules:
        ctx = "rule %s: " % rule.name
        if rule.name in seen_names:
            violations.append(ctx + "duplicate rule name")
        seen_names.add(rule.name)
        p = rule.pattern
        if len(set(p.names)) != len(p.names):
            violations.append(ctx + "duplicate cell name")
            continue
        for name, color in p.cells:
            if color is not None and color not in ruleset.palette:
                violations.append(ctx + "color %s not in palette" % color)
        for a, l, b in p.edges:
            if a not in p.index or b not in p.index:
                violations.append(ctx + "edge endpoint not a cell")
            if l not in ruleset.labels:
                violations.append(ctx + "label %s not in alphabet" % l)
        r = p.radius()
        if r is None:
            violations.append(ctx + "pattern is disconnected")
        elif r > ruleset.radius:
            violations.append(ctx + "radius %d exceeds bound %d"
                              % (r, ruleset.radius))
        if p.has_directed_cycle():
            violations.append(ctx + "pattern loop")
        if rule.neg_edges and not negative_edges:
            violations.append(ctx + "negative edges without the extension flag")
        known = set(p.names)
        for name, color, kind in rule.rewrite.creates:
            if name in known:
                violations.append(ctx + "created cell %s shadows a cell" % name)
            known.add(name)
            if color not in ruleset.palette:
                violations.append(ctx + "created color %s not in palette"
                                  % color)
        for name, color in rule.rewrite.recolor:
            if name not in known:
                violations.append(ctx + "recolor of unknown cell %s" % name)
            if color not in ruleset.palette:
                violations.append(ctx + "recolor to %s not in palette" % color)
        for a, l, b in (list(rule.rewrite.add_edges)
                        + list(rule.rewrite.del_edges)):
            if a not in known or b not in known:
                violations.append(ctx + "uncovered cell in edge edit")
            if l not in ruleset.labels:
                violations.append(ctx + "edit label %s not in alphabet" % l)
        for a, l, b in rule.neg_edges:
            if a not in p.index or b not in p.index:
                violations.append(ctx + "negative edge endpoint unbound")
    return violations


# -- serialization ----------------------------------------------------

def serialize_ruleset(ruleset):
    lines = ["ruleset"]
    lines.append("palette " + " ".join(sorted(ruleset.palette)))
    lines.append("labels " + " ".join(sorted(ruleset.labels)))
    lines.append("radius %d" % ruleset.radius)
    for rule in ruleset.rules:
        lines.append("rule %s" % rule.name)
        p = rule.pattern
        for name, color in p.cells:
            mark = " focus" if name == p.focus else ""
            lines.append("  cell %s %s%s" % (name, color or "*", mark))
        for a, l, b in p.edges:
            lines.append("  edge %s %s %s" % (a, l, b))
        for a, l, b in rule.neg_edges:
            lines.append("  neg %s %s %s" % (a, l, b))
        for name, color, kind in rule.rewrite.creates:
            lines.append("  create %s %s %s" % (name, color, kind))
        for a, l, b in rule.rewrite.del_edges:
            lines.append("  del %s %s %s" % (a, l, b))
        for a, l, b in rule.rewrite.add_edges:
            lines.append("  add %s %s %s" % (a, l, b))
        for name, color in rule.rewrite.recolor:
            lines.append("  recolor %s %s" % (name, color))
        lines.append("end")
    return "\n".join(lines) + "\n"


def parse_ruleset(text):
    lines = [ln.rstrip() for ln in text.splitlines()]
    if not lines or lines[0].strip() != "ruleset":
        raise RuleError("not a ruleset file")
    palette, labels, radius = set(), set(), None
    rules = []
    i = 1
    cur = None

    def finish(cur):
        name, cells, edges, focus, neg, creates, dels, adds, recolors = cur
        if focus is None:
            raise RuleError("rule %s has no focus cell" % name)
        rules.append(Rule(name, Pattern(cells, edges, focus),
                          Rewrite(recolors, adds, dels, creates), neg))

    while i < len(lines):
        ln = lines[i].strip()
        i += 1
        if not ln:
            continue
        parts = ln.split()
        if cur is None:
            if parts[0] == "palette":
                palette.update(parts[1:])
            elif parts[0] == "labels":
                labels.update(parts[1:])
            elif parts[0] == "radius":
                radius = int(parts[1])
            elif parts[0] == "rule":
                cur = [parts[1], [], [], None, [], [], [], [], []]
            else:
                raise RuleError("unexpected line: %s" % ln)
            continue
        name, cells, edges, focus, neg, creates, dels, adds, recolors = cur
        if parts[0] == "cell":
            color = None if parts[2] == "*" else parts[2]
            cells.append((parts[1], color))
            if len(parts) > 3 and parts[3] == "focus":
                cur[3] = parts[1]
        elif parts[0] == "edge":
            edges.append((parts[1], parts[2], parts[3]))
        elif parts[0] == "neg":
            neg.append((parts[1], parts[2], parts[3]))
        elif parts[0] == "create":
            creates.append((parts[1], parts[2], parts[3]))
        elif parts[0] == "del":
            dels.append((parts[1], parts[2], parts[3]))
        elif parts[0] == "add":
            adds.append((parts[1], parts[2], parts[3]))
        elif parts[0] == "recolor":
            recolors.append((parts[1], parts[2]))
        elif parts[0] == "end":
            finish(cur)
            cur = None
        else:
            raise RuleError("unexpected line in rule: %s" % ln)
    if cur is not None:
        raise RuleError("unterminated rule")
    if radius is None:
        raise RuleError("missing radius")
    return RuleSet(palette, labels, rules, radius)
