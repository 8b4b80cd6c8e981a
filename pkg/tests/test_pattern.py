"""Anchored matching against a brute-force oracle; precedence; serialization."""
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from tangleca import pattern, tangle
from tangleca.pattern import (Match, Pattern, Rewrite, Rule, RuleError,
                              RuleSet, apply, match_all, maximality_filter,
                              parse_ruleset, serialize_ruleset,
                              validate_ruleset)

COLORS = ("red", "green", "blue")
LABELS = ("x", "y", "z")


def brute_matches(g, ruleset, negative_edges=False):
    """Reference matcher: try every injective assignment outright."""
    out = []
    node_ids = sorted(g.nodes)
    for rule_index, rule in enumerate(ruleset.rules):
        p = rule.pattern
        names = p.names
        focus_i = p.index[p.focus]
        rest = [i for i in range(len(names)) if i != focus_i]
        for perm in itertools.permutations(node_ids, len(rest)):
            binding = [None] * len(names)
            binding[focus_i] = g.active
            for i, nid in zip(rest, perm):
                binding[i] = nid
            if len(set(binding)) != len(binding):
                continue
            ok = all(
                p.cells[i][1] is None
                or g.color_of(binding[i]) == p.cells[i][1]
                for i in range(len(names)))
            ok = ok and all(
                g.has_edge(binding[p.index[a]], l, binding[p.index[b]])
                for a, l, b in p.edges)
            if ok and negative_edges:
                ok = not any(
                    g.has_edge(binding[p.index[a]], l, binding[p.index[b]])
                    for a, l, b in rule.neg_edges)
            if ok:
                out.append((rule_index, tuple(binding)))
    return sorted(out)


def probe_rules():
    """A small zoo of pattern shapes over COLORS/LABELS."""
    mk = lambda cells, edges, focus, negs=(): Rule(
        "probe%d" % mk.n, Pattern(cells, edges, focus), Rewrite(), negs)
    mk.n = 0
    rules = []

    def add(cells, edges, focus, negs=()):
        r = mk(cells, edges, focus, negs)
        mk.n += 1
        rules.append(r)

    add([("C", None)], [], "C")                               # bare focus
    add([("C", "red"), ("A", None)], [("C", "x", "A")], "C")  # out edge
    add([("C", None), ("A", "green")], [("A", "y", "C")], "C")  # in edge
    add([("C", None), ("A", None), ("B", "blue")],
        [("C", "x", "A"), ("A", "y", "B")], "C")              # chain
    add([("C", None), ("A", None), ("B", None)],
        [("C", "x", "A"), ("C", "x", "B")], "C")              # fan, same label
    add([("C", None), ("A", None), ("B", None)],
        [("C", "x", "A"), ("A", "y", "B"), ("C", "z", "B")], "C")  # check edge
    add([("C", None), ("A", None)], [("C", "x", "A")], "C",
        negs=[("A", "y", "C"), ("C", "z", "A")])              # negatives
    return RuleSet(COLORS, LABELS, rules, radius=3)


@st.composite
def random_tangles(draw):
    g = tangle.Tangle()
    n = draw(st.integers(min_value=1, max_value=6))
    ids = [g.add_node(draw(st.sampled_from(COLORS)), tangle.SET)
           for _ in range(n)]
    g.active = ids[0]
    possible = [(a, l, b) for a in ids for b in ids if a != b for l in LABELS]
    for e in draw(st.lists(st.sampled_from(possible), max_size=12,
                           unique=True) if possible else st.just([])):
        g.add_edge(*e)
    return g


class TestMatching:
    @given(g=random_tangles(), neg=st.booleans())
    @settings(max_examples=200, deadline=None)
    def test_matches_equal_brute_force(self, g, neg):
        rules = probe_rules()
        got = sorted((m.rule_index, m.binding_tuple())
                     for m in match_all(g, rules, negative_edges=neg))
        assert got == brute_matches(g, rules, negative_edges=neg)

    @given(g=random_tangles())
    @settings(max_examples=60, deadline=None)
    def test_match_order_is_canonical(self, g):
        rules = probe_rules()
        seq = [(m.rule_index, m.binding_tuple())
               for m in match_all(g, rules)]
        assert seq == sorted(seq)

    def test_injectivity(self):
        g = tangle.Tangle()
        c = g.add_node("red", tangle.SET)
        g.active = c
        g.add_edge(c, "x", c)  # self loop: C and A cannot both bind c
        rules = RuleSet(COLORS, LABELS, [
            Rule("two", Pattern([("C", None), ("A", None)],
                                [("C", "x", "A")], "C"), Rewrite())], 3)
        assert match_all(g, rules) == []

    def test_anchoring_at_active_only(self):
        g = tangle.Tangle()
        a = g.add_node("red", tangle.SET)
        b = g.add_node("red", tangle.SET)
        g.add_edge(a, "x", b)
        rules = RuleSet(COLORS, LABELS, [
            Rule("out", Pattern([("C", "red"), ("A", None)],
                                [("C", "x", "A")], "C"), Rewrite())], 3)
        g.active = a
        assert len(match_all(g, rules)) == 1
        g.active = b
        assert match_all(g, rules) == []


class TestMaximality:
    def _match(self, rule, rule_index, nodes):
        binding = dict(zip(rule.pattern.names, nodes))
        return Match(rule, rule_index, binding)

    def _rules(self):
        small = Rule("small", Pattern([("C", None)], [], "C"), Rewrite())
        big = Rule("big", Pattern([("C", None), ("A", None)],
                                  [("C", "x", "A")], "C"), Rewrite())
        return small, big

    def test_strict_subset_blocked(self):
        small, big = self._rules()
        m1 = self._match(small, 0, [1])
        m2 = self._match(big, 1, [1, 2])
        assert maximality_filter([m1, m2]) == [m2]

    def test_equal_cellsets_both_survive(self):
        _, big = self._rules()
        m1 = self._match(big, 1, [1, 2])
        m2 = self._match(big, 1, [2, 1])
        assert maximality_filter([m1, m2]) == [m1, m2]

    def test_incomparable_survive(self):
        _, big = self._rules()
        m1 = self._match(big, 1, [1, 2])
        m2 = self._match(big, 1, [1, 3])
        assert maximality_filter([m1, m2]) == [m1, m2]

    def test_chain_keeps_only_maximal(self):
        small, big = self._rules()
        wide = Rule("wide", Pattern(
            [("C", None), ("A", None), ("B", None)],
            [("C", "x", "A"), ("C", "x", "B")], "C"), Rewrite())
        m1 = self._match(small, 0, [1])
        m2 = self._match(big, 1, [1, 2])
        m3 = self._match(wide, 2, [1, 2, 3])
        assert maximality_filter([m1, m2, m3]) == [m3]

    @given(sets=st.lists(st.frozensets(st.integers(1, 6), min_size=1),
                         min_size=1, max_size=8))
    @settings(max_examples=100, deadline=None)
    def test_filter_equals_bruteforce_subset_check(self, sets):
        rule = Rule("r", Pattern([("C", None)], [], "C"), Rewrite())
        matches = []
        for s in sets:
            m = Match(rule, 0, {})
            m.cellset = frozenset(s)
            matches.append(m)
        got = maximality_filter(matches)
        want = [m for m in matches
                if not any(m.cellset < o.cellset for o in matches)]
        assert got == want


class TestPatternStructure:
    def test_radius(self):
        chain = Pattern([("A", None), ("B", None), ("C", None)],
                        [("A", "x", "B"), ("B", "x", "C")], "A")
        assert chain.radius() == 2
        assert Pattern([("A", None)], [], "A").radius() == 0
        disconnected = Pattern([("A", None), ("B", None)], [], "A")
        assert disconnected.radius() is None

    def test_directed_cycle_detection(self):
        loop = Pattern([("A", None), ("B", None)],
                       [("A", "x", "B"), ("B", "y", "A")], "A")
        assert loop.has_directed_cycle()
        dag = Pattern([("A", None), ("B", None), ("C", None)],
                      [("A", "x", "B"), ("A", "y", "C"), ("B", "z", "C")],
                      "A")
        assert not dag.has_directed_cycle()

    def test_focus_must_be_a_cell(self):
        with pytest.raises(RuleError):
            Pattern([("A", None)], [], "Z")

    def test_plan_rejects_disconnected_pattern(self):
        r = Rule("d", Pattern([("A", None), ("B", None)], [], "A"),
                 Rewrite())
        with pytest.raises(RuleError):
            RuleSet(COLORS, LABELS, [r], 3).plans()


class TestApply:
    def _simple(self):
        g = tangle.Tangle()
        c = g.add_node("red", tangle.SET)
        a = g.add_node("green", tangle.SET)
        g.add_edge(c, "x", a)
        g.active = c
        rule = Rule(
            "edit",
            Pattern([("C", "red"), ("A", "green")], [("C", "x", "A")], "C"),
            Rewrite(recolor=[("C", "blue")],
                    add_edges=[("A", "y", "C"), ("A", "z", "W")],
                    del_edges=[("C", "x", "A")],
                    creates=[("W", "green", tangle.SET)]))
        return g, rule

    def test_rewrite_effects(self):
        g, rule = self._simple()
        (m,) = match_all(g, RuleSet(COLORS, LABELS, [rule], 3))
        created = apply(g, m)
        assert len(created) == 1
        (w,) = created
        assert g.color_of(w) == "green"
        assert g.color_of(g.active) == "blue"
        assert not g.has_edge(m.binding["C"], "x", m.binding["A"])
        assert g.has_edge(m.binding["A"], "y", m.binding["C"])
        assert g.has_edge(m.binding["A"], "z", w)

    def test_stale_match_raises(self):
        g, rule = self._simple()
        (m,) = match_all(g, RuleSet(COLORS, LABELS, [rule], 3))
        g.set_color(m.binding["A"], "blue")
        with pytest.raises(RuleError):
            apply(g, m)
        g.set_color(m.binding["A"], "green")
        g.remove_edge(m.binding["C"], "x", m.binding["A"])
        with pytest.raises(RuleError):
            apply(g, m)


class TestValidate:
    def _ok_rule(self, name="ok"):
        return Rule(name, Pattern([("C", "red"), ("A", None)],
                                  [("C", "x", "A")], "C"),
                    Rewrite(recolor=[("C", "green")]))

    def test_clean(self):
        rs = RuleSet(COLORS, LABELS, [self._ok_rule()], 3)
        assert validate_ruleset(rs) == []

    def test_violations(self):
        bad_color = Rule("bc", Pattern([("C", "purple")], [], "C"), Rewrite())
        bad_label = Rule("bl", Pattern([("C", None), ("A", None)],
                                       [("C", "w", "A")], "C"), Rewrite())
        too_far = Rule("tf", Pattern(
            [("A", None), ("B", None), ("C", None), ("D", None), ("E", None)],
            [("A", "x", "B"), ("B", "x", "C"), ("C", "x", "D"),
             ("D", "x", "E")], "A"), Rewrite())
        loop = Rule("lp", Pattern([("C", None), ("A", None)],
                                  [("C", "x", "A"), ("A", "y", "C")], "C"),
                    Rewrite())
        neg = Rule("ng", Pattern([("C", None), ("A", None)],
                                 [("C", "x", "A")], "C"), Rewrite(),
                   neg_edges=[("C", "y", "A")])
        bad_recolor = Rule("br", Pattern([("C", None)], [], "C"),
                           Rewrite(recolor=[("Z", "red")]))
        dup1 = self._ok_rule("dup")
        dup2 = self._ok_rule("dup")
        rs = RuleSet(COLORS, LABELS,
                     [bad_color, bad_label, too_far, loop, neg,
                      bad_recolor, dup1, dup2], 3)
        v = validate_ruleset(rs, negative_edges=False)
        assert any("not in palette" in s for s in v)
        assert any("not in alphabet" in s for s in v)
        assert any("radius" in s for s in v)
        assert any("loop" in s for s in v)
        assert any("negative edges" in s for s in v)
        assert any("unknown cell" in s for s in v)
        assert any("duplicate rule name" in s for s in v)
        # the same set is clean once the extension flag admits negatives
        ok = RuleSet(COLORS, LABELS, [neg], 3)
        assert validate_ruleset(ok, negative_edges=True) == []


class TestSerialization:
    def _ruleset(self):
        r1 = Rule("edit:one",
                  Pattern([("C", "red"), ("A", None)], [("C", "x", "A")],
                          "C"),
                  Rewrite(recolor=[("C", "blue")],
                          add_edges=[("A", "y", "C")],
                          del_edges=[("C", "x", "A")],
                          creates=[("W", "green", tangle.SET)]))
        r2 = Rule("edit:two", Pattern([("C", None)], [], "C"), Rewrite(),
                  neg_edges=[("C", "z", "C")])
        return RuleSet(COLORS, LABELS, [r1, r2], 3)

    def test_roundtrip_is_identity_on_text(self):
        rs = self._ruleset()
        text = serialize_ruleset(rs)
        again = serialize_ruleset(parse_ruleset(text))
        assert text == again

    def test_roundtrip_preserves_structure(self):
        rs = parse_ruleset(serialize_ruleset(self._ruleset()))
        assert [r.name for r in rs.rules] == ["edit:one", "edit:two"]
        r1 = rs.rules[0]
        assert r1.pattern.cells == [("C", "red"), ("A", None)]
        assert r1.rewrite.creates == [("W", "green", tangle.SET)]
        assert rs.rules[1].neg_edges == [("C", "z", "C")]
        assert rs.radius == 3

    def test_parse_rejects_garbage(self):
        with pytest.raises(RuleError):
            parse_ruleset("not a ruleset\n")
        with pytest.raises(RuleError):
            parse_ruleset("")
