# cython: language_level=3, boundscheck=False, wraparound=False
"""Anchored subgraph matching, compiled kernel.

Behavioral twin of _match_py; keep the two in sync (the parity test
compares their output match-for-match).
"""

KERNEL_NAME = "cython"


cdef class Plan:
    cdef public int rule_index
    cdef public int n
    cdef public list colors
    cdef public int focus
    cdef public list steps
    cdef public list checks
    cdef public list negs

    def __init__(self, rule_index, n, colors, focus, steps, checks, negs):
        self.rule_index = rule_index
        self.n = n
        self.colors = list(colors)
        self.focus = focus
        self.steps = [tuple(s) for s in steps]
        self.checks = [tuple(c) for c in checks]
        self.negs = [tuple(c) for c in negs]


class PlanIndex:
    """Plans grouped by required focus color; wildcard focus always tried."""

    def __init__(self, plans):
        self.by_color = {}
        self.wildcard = []
        for p in plans:
            c = p.colors[p.focus]
            if c is None:
                self.wildcard.append(p)
            else:
                self.by_color.setdefault(c, []).append(p)

    def candidates(self, color):
        colored = self.by_color.get(color)
        if not colored:
            return self.wildcard
        if not self.wildcard:
            return colored
        merged = colored + self.wildcard
        merged.sort(key=lambda p: p.rule_index)
        return merged


def enumerate_matches(index, g, active, negative_edges):
    """All matches anchored at `active`, as (rule_index, binding) pairs."""
    cdef list out = []
    nodes = g.nodes
    active_color = nodes[active].color
    cdef Plan plan
    for plan in index.candidates(active_color):
        want = plan.colors[plan.focus]
        if want is not None and want != active_color:
            continue
        binding = [-1] * plan.n
        binding[plan.focus] = active
        if plan.n == 1:
            _finish(plan, g, binding, out, negative_edges)
        else:
            _extend(plan, g, 0, binding, out, negative_edges)
    return out


cdef void _extend(Plan plan, g, int depth, list binding, list out,
                  bint negative_edges):
    cdef int new, frm, cand, anchor
    cdef bint forward, ok, last
    new, frm, label, forward = plan.steps[depth]
    anchor = binding[frm]
    if forward:
        cands = g.out[anchor].get(label)
    else:
        cands = g.inn[anchor].get(label)
    if not cands:
        return
    want = plan.colors[new]
    nodes = g.nodes
    last = depth == len(plan.steps) - 1
    for cand in sorted(cands):
        if want is not None and nodes[cand].color != want:
            continue
        ok = True
        for b in binding:
            if b == cand:
                ok = False
                break
        if not ok:
            continue
        binding[new] = cand
        if last:
            _finish(plan, g, binding, out, negative_edges)
        else:
            _extend(plan, g, depth + 1, binding, out, negative_edges)
        binding[new] = -1


cdef void _finish(Plan plan, g, list binding, list out, bint negative_edges):
    cdef int a_id, b_id
    for a, label, b in plan.checks:
        a_id = binding[a]
        b_id = binding[b]
        targets = g.out[a_id].get(label)
        if not targets or b_id not in targets:
            return
    if negative_edges:
        for a, label, b in plan.negs:
            a_id = binding[a]
            b_id = binding[b]
            targets = g.out[a_id].get(label)
            if targets and b_id in targets:
                return
    out.append((plan.rule_index, tuple(binding)))
