"""Tangle: the automaton's state graph.

A tangle is a colored directed graph encoding HF values with maximal
sharing (at most one committed node per value), plus one distinguished
Criticals focus node whose labeled outgoing edges name the values of
critical terms and function locations.

Containment edges are reversed: an element points at the set holding it
(label "elem"), pair components point at the pair ("fst"/"snd").  Only
Criticals edges and tuple edges run outward.
"""
from __future__ import annotations

from .hfset import Universe, HFValue

# structural edge labels
ELEM = "elem"
FST = "fst"
SND = "snd"
VAL = "val"


def arg_label(i):
    return "arg%d" % i


# permanent plumbing edges out of Criticals
EMPTY_EDGE = "#empty"
TRUE_EDGE = "#true"
FALSE_EDGE = "#false"
ATOM_EDGE_PREFIX = "#atom_"


def atom_edge(name):
    """Permanent addressing edge for a pre-created atom node."""
    return ATOM_EDGE_PREFIX + name

# node kinds
ATOM = "atom"
SET = "set"
PAIR = "pair"
TUPLE = "tuple"
CRITICALS = "criticals"
SCRATCH = "scratch"

# colors with fixed meaning; compiled rule sets add their own
PLAIN = "plain"
EMPTY = "empty"
MARKER = "marker"
JUNK = "junk"

# node colors under which a value node counts as committed (uniqueness
# is asserted over these only; protocol marks are exempt)
COMMITTED = frozenset((PLAIN, EMPTY))

CONTAINMENT = frozenset((ELEM, FST, SND))


class TangleError(Exception):
    pass


class TangleNode:
    __slots__ = ("id", "color", "kind", "payload")

    def __init__(self, id, color, kind, payload=None):
        self.id = id
        self.color = color
        self.kind = kind
        self.payload = payload  # atom name; inert, invisible to patterns

    def __repr__(self):
        return "TangleNode(%d, %r, %r)" % (self.id, self.color, self.kind)


class Tangle:
    """Single-owner mutable graph.  Nodes are never removed."""

    def __init__(self):
        self.nodes = {}
        self.out = {}  # src -> label -> set of dst
        self.inn = {}  # dst -> label -> set of src
        self.active = None
        self._next_id = 0
        self._edge_count = 0

    def add_node(self, color, kind, payload=None):
        nid = self._next_id
        self._next_id += 1
        self.nodes[nid] = TangleNode(nid, color, kind, payload)
        self.out[nid] = {}
        self.inn[nid] = {}
        return nid

    def color_of(self, nid):
        return self.nodes[nid].color

    def set_color(self, nid, color):
        self.nodes[nid].color = color

    def add_edge(self, src, label, dst):
        # edge sets: re-adding an existing edge is a no-op
        targets = self.out[src].setdefault(label, set())
        if dst not in targets:
            targets.add(dst)
            self.inn[dst].setdefault(label, set()).add(src)
            self._edge_count += 1

    def remove_edge(self, src, label, dst):
        targets = self.out[src].get(label)
        if targets and dst in targets:
            targets.remove(dst)
            self.inn[dst][label].remove(src)
            self._edge_count -= 1

    def has_edge(self, src, label, dst):
        targets = self.out[src].get(label)
        return bool(targets) and dst in targets

    def targets(self, src, label):
        return self.out[src].get(label, _EMPTY_SET)

    def sources(self, dst, label):
        return self.inn[dst].get(label, _EMPTY_SET)

    def node_count(self):
        return len(self.nodes)

    def edge_count(self):
        return self._edge_count

    def edges(self):
        for src in sorted(self.out):
            by_label = self.out[src]
            for label in sorted(by_label):
                for dst in sorted(by_label[label]):
                    yield (src, label, dst)

    def copy(self):
        g = Tangle()
        g._next_id = self._next_id
        g.active = self.active
        g._edge_count = self._edge_count
        for nid, n in self.nodes.items():
            g.nodes[nid] = TangleNode(n.id, n.color, n.kind, n.payload)
            g.out[nid] = {l: set(t) for l, t in self.out[nid].items() if t}
            g.inn[nid] = {l: set(s) for l, s in self.inn[nid].items() if s}
        return g

    def criticals(self):
        found = [n.id for n in self.nodes.values() if n.kind == CRITICALS]
        if len(found) != 1:
            raise TangleError("expected exactly one criticals node, found %d"
                              % len(found))
        return found[0]

    # -- stable text formats ------------------------------------------

    def snapshot(self):
        lines = []
        for nid in sorted(self.nodes):
            n = self.nodes[nid]
            lines.append("node %d %s %s" % (nid, n.color, n.kind))
        for src, label, dst in self.edges():
            lines.append("edge %d %s %d" % (src, label, dst))
        return "\n".join(lines) + "\n"

    def to_dot(self):
        lines = ["digraph tangle {"]
        for nid in sorted(self.nodes):
            n = self.nodes[nid]
            shape = {CRITICALS: "doublecircle", TUPLE: "box",
                     SCRATCH: "diamond"}.get(n.kind, "ellipse")
            label = "%d:%s" % (nid, n.color)
            if n.payload is not None:
                label += ":" + str(n.payload)
            lines.append('  n%d [label="%s", shape=%s];' % (nid, label, shape))
        for src, label, dst in self.edges():
            lines.append('  n%d -> n%d [label="%s"];' % (src, dst, label))
        lines.append("}")
        return "\n".join(lines) + "\n"


_EMPTY_SET = frozenset()


def is_internal_label(label):
    """Register / mark / plumbing labels, never critical-term names."""
    return label.startswith("$") or label.startswith("#")


def encode(terms, locations=None, universe=None, criticals_color=PLAIN,
           atoms=()):
    """Build a tangle for a critical-term mapping (plus function locations).

    One node per distinct value.  The empty set node is always present,
    held by a permanent #empty edge from Criticals, so rule sets have a
    guaranteed handle on the empty set.  Atom names passed via `atoms`
    are likewise pre-created and held by #atom_<name> edges: created
    nodes carry no atom identity, so every atom a rule set mentions must
    exist up front.
    """
    u = universe if universe is not None else Universe()
    g = Tangle()
    c = g.add_node(criticals_color, CRITICALS)
    g.active = c
    nodemap = {}

    def value_node(v):
        nid = nodemap.get(v.uid)
        if nid is not None:
            return nid
        if v.is_atom():
            nid = g.add_node(PLAIN, ATOM, payload=v.name)
        elif v.is_set():
            members = [value_node(m) for m in v.members]
            nid = g.add_node(EMPTY if not members else PLAIN, SET)
            for m in members:
                g.add_edge(m, ELEM, nid)
        else:
            f = value_node(v.first)
            s = value_node(v.second)
            nid = g.add_node(PLAIN, PAIR)
            g.add_edge(f, FST, nid)
            g.add_edge(s, SND, nid)
        nodemap[v.uid] = nid
        return nid

    g.add_edge(c, EMPTY_EDGE, value_node(u.empty()))
    for name in sorted(atoms):
        g.add_edge(c, atom_edge(name), value_node(u.atom(name)))
    for name in sorted(terms):
        g.add_edge(c, name, value_node(terms[name]))
    if locations:
        seen_tuples = {}
        for (fname, args) in sorted(locations,
                                    key=lambda k: (k[0],
                                                   tuple(a.uid for a in k[1]))):
            val = locations[(fname, args)]
            key = (fname,) + tuple(a.uid for a in args)
            if key in seen_tuples:
                raise TangleError("duplicate location %r" % (key,))
            t = g.add_node(PLAIN, TUPLE)
            seen_tuples[key] = t
            for i, a in enumerate(args, start=1):
                g.add_edge(t, arg_label(i), value_node(a))
            g.add_edge(t, VAL, value_node(val))
            g.add_edge(c, fname, t)
    return g


def _node_values(g, universe, strict=True):
    """Map node id -> HFValue for decodable committed nodes.

    Walks containment bottom-up; reports cycles.  With strict=False,
    nodes that fail to decode are skipped instead of raising.
    """
    u = universe
    values = {}
    state = {}  # nid -> "visiting" | "done"

    def walk(nid, stack):
        if nid in values:
            return values[nid]
        if state.get(nid) == "visiting":
            raise TangleError("containment cycle through node %d" % nid)
        node = g.nodes[nid]
        state[nid] = "visiting"
        try:
            if node.kind == ATOM:
                v = u.atom(node.payload)
            elif node.kind == SET:
                members = []
                for label in (ELEM,):
                    for src in sorted(g.sources(nid, label)):
                        members.append(walk(src, stack))
                v = u.set_of(members)
            elif node.kind == PAIR:
                fsts = sorted(g.sources(nid, FST))
                snds = sorted(g.sources(nid, SND))
                if len(fsts) != 1 or len(snds) != 1:
                    raise TangleError(
                        "pair node %d has %d fst / %d snd components"
                        % (nid, len(fsts), len(snds)))
                v = u.pair(walk(fsts[0], stack), walk(snds[0], stack))
            else:
                raise TangleError("node %d of kind %s is not a value"
                                  % (nid, node.kind))
        finally:
            state[nid] = "done"
        values[nid] = v
        return v

    for nid in sorted(g.nodes):
        node = g.nodes[nid]
        if node.kind in (ATOM, SET, PAIR) and node.color in COMMITTED:
            try:
                walk(nid, [])
            except TangleError:
                if strict:
                    raise
    return values


def decode(g, universe=None):
    """Critical-term mapping back out of a tangle.

    Skips internal ($/#) edges and function-location tuples; raises
    TangleError on malformed structure (dangling critical edge,
    containment cycle, duplicate committed values).
    """
    u = universe if universe is not None else Universe()
    c = g.criticals()
    values = {}
    state = {}

    def walk(nid):
        if nid in values:
            return values[nid]
        if state.get(nid) == "visiting":
            raise TangleError("containment cycle through node %d" % nid)
        node = g.nodes.get(nid)
        if node is None:
            raise TangleError("dangling edge to missing node %d" % nid)
        state[nid] = "visiting"
        if node.kind == ATOM:
            v = u.atom(node.payload)
        elif node.kind == SET:
            v = u.set_of(walk(src) for src in sorted(g.sources(nid, ELEM)))
        elif node.kind == PAIR:
            fsts = sorted(g.sources(nid, FST))
            snds = sorted(g.sources(nid, SND))
            if len(fsts) != 1 or len(snds) != 1:
                raise TangleError("pair node %d has %d fst / %d snd components"
                                  % (nid, len(fsts), len(snds)))
            v = u.pair(walk(fsts[0]), walk(snds[0]))
        else:
            raise TangleError("critical edge reaches %s node %d"
                              % (node.kind, nid))
        state[nid] = "done"
        values[nid] = v
        return v

    result = {}
    for label in sorted(g.out[c]):
        if is_internal_label(label):
            continue
        for dst in sorted(g.targets(c, label)):
            node = g.nodes.get(dst)
            if node is None:
                raise TangleError("dangling critical edge %s" % label)
            if node.kind == TUPLE:
                continue  # function location, not a critical term
            if label in result:
                raise TangleError("critical term %s has multiple edges" % label)
            result[label] = walk(dst)

    # duplicate committed values anywhere in the graph are malformed
    seen = {}
    for nid, v in _node_values(g, u, strict=False).items():
        prev = seen.get(v.uid)
        if prev is not None:
            raise TangleError(
                "nodes %d and %d both decode to committed value %r"
                % (prev, nid, v))
        seen[v.uid] = nid
    return result


def decode_locations(g, universe=None):
    """Function-location mapping (f, args) -> value out of a tangle."""
    u = universe if universe is not None else Universe()
    c = g.criticals()
    values = _node_values(g, u, strict=True)

    def value_at(nid, what):
        if nid not in values:
            raise TangleError("%s reaches undecodable node %d" % (what, nid))
        return values[nid]

    result = {}
    for label in sorted(g.out[c]):
        if is_internal_label(label):
            continue
        for dst in sorted(g.targets(c, label)):
            node = g.nodes.get(dst)
            if node is None or node.kind != TUPLE:
                continue
            args = []
            i = 1
            while True:
                ts = sorted(g.targets(dst, arg_label(i)))
                if not ts:
                    break
                if len(ts) != 1:
                    raise TangleError("tuple %d has %d arg%d edges"
                                      % (dst, len(ts), i))
                args.append(value_at(ts[0], "tuple arg"))
                i += 1
            vals = sorted(g.targets(dst, VAL))
            if len(vals) != 1:
                raise TangleError("tuple %d has %d val edges"
                                  % (dst, len(vals)))
            key = (label, tuple(args))
            if key in result:
                raise TangleError("duplicate location %s" % (key,))
            result[key] = value_at(vals[0], "tuple val")
    return result


def find_value_node(g, v, universe=None):
    """The unique committed node decoding to v, or None."""
    u = universe if universe is not None else Universe()
    hits = [nid for nid, val in _node_values(g, u, strict=False).items()
            if val is v or val.uid == v.uid]
    if len(hits) > 1:
        raise TangleError("value %r has %d committed nodes" % (v, len(hits)))
    return hits[0] if hits else None


def check_invariants(g, universe=None):
    """List of structural violations; empty iff the tangle is well formed.

    Checks: exactly one Criticals node, active is Criticals, containment
    acyclicity, committed-value uniqueness, pair component counts.
    """
    u = universe if universe is not None else Universe()
    violations = []
    crit = [n.id for n in g.nodes.values() if n.kind == CRITICALS]
    if len(crit) != 1:
        violations.append("multiple criticals" if len(crit) > 1
                          else "no criticals")
    elif g.active != crit[0]:
        violations.append("active is not the criticals node")

    # containment acyclicity via iterative DFS over reversed containment
    color = {}
    for start in g.nodes:
        if color.get(start):
            continue
        stack = [(start, None)]
        while stack:
            nid, it = stack[-1]
            if it is None:
                if color.get(nid) == "done":
                    stack.pop()
                    continue
                color[nid] = "active"
                succ = []
                for label in CONTAINMENT:
                    succ.extend(g.sources(nid, label))
                it = iter(sorted(set(succ)))
                stack[-1] = (nid, it)
            advanced = False
            for nxt in it:
                if color.get(nxt) == "active":
                    violations.append("containment cycle")
                    color[nxt] = "done"
                    continue
                if color.get(nxt) != "done":
                    stack.append((nxt, None))
                    advanced = True
                    break
            if not advanced:
                color[nid] = "done"
                stack.pop()
        if "containment cycle" in violations:
            break

    if "containment cycle" not in violations:
        seen = {}
        try:
            for nid, v in _node_values(g, u, strict=False).items():
                if v.uid in seen:
                    violations.append(
                        "duplicate committed value at nodes %d and %d"
                        % (seen[v.uid], nid))
                else:
                    seen[v.uid] = nid
        except TangleError as e:
            violations.append(str(e))
    return violations
