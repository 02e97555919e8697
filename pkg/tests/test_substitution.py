import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apktheory.substitution import (
    NonPrimitiveRule,
    Patch,
    RuleError,
    RuleSyntaxError,
    adjacency_closure,
    parse_rule,
    serialize_rule,
    substitute,
)
from apktheory.substitution import geometry as g
from helpers import BUILTINS, SLOW_BUILTINS, builtin, one_d, rule_text, square_rule


def test_parse_builtins():
    assert builtin("solenoid").labels == ("S",)
    assert builtin("solenoid").dimension == 2
    silver = builtin("silver-mean")
    assert silver.dimension == 1
    assert silver.children == {"a": ("b",), "b": ("b", "a", "b")}
    assert len(builtin("chair").labels) == 4
    assert len(builtin("half-hex").labels) == 6


@pytest.mark.parametrize("name", BUILTINS + SLOW_BUILTINS)
def test_serialize_round_trip(name):
    text = rule_text(name)
    rule = parse_rule(text)
    assert serialize_rule(rule) == text
    assert serialize_rule(parse_rule(serialize_rule(rule))) == text


def test_overlapping_children_rejected():
    bad = square_rule([(0, 0), (1, 0), (0, 1), (Fraction(1, 2), 1)])
    with pytest.raises(RuleError, match="overlaps child"):
        parse_rule(bad)


def test_gap_rejected():
    with pytest.raises(RuleError):
        parse_rule(square_rule([(0, 0), (1, 0), (0, 1)]))


def test_child_outside_rejected():
    with pytest.raises(RuleError):
        parse_rule(square_rule([(0, 0), (1, 0), (0, 1), (2, 1)]))


def test_syntax_error_position():
    with pytest.raises(RuleSyntaxError) as info:
        parse_rule('{"name": "x",\n "dimension": 1,\n  "prototiles": [}')
    assert (info.value.line, info.value.column) == (3, 18)
    assert str(info.value).startswith("line 3, column 18:")


def test_nonprimitive_needs_override():
    with pytest.raises(NonPrimitiveRule):
        one_d("aa", "b")
    doc = {"name": "split", "dimension": 1,
           "prototiles": [{"label": "a", "word": ["a", "a"]}, {"label": "b", "word": ["b"]}]}
    rule = parse_rule(json.dumps(doc), allow_nonprimitive=True)
    assert not rule.primitive


def test_clockwise_prototile_rejected():
    doc = json.loads(square_rule([(0, 0), (1, 0), (0, 1), (1, 1)]))
    doc["prototiles"][0]["vertices"].reverse()
    with pytest.raises(RuleError):
        parse_rule(json.dumps(doc))


def test_substitute_examples():
    fib = one_d("ab", "a")
    assert substitute(fib, "a", 0) == "a"
    assert substitute(fib, "a", 2) == "aba"
    sol = builtin("solenoid")
    p = substitute(sol, Patch.single(sol, "S"), 1)
    assert sorted(t for _, t in p.tiles) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert substitute(sol, p, 0) == p


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["solenoid", "half-hex", "chair"]), st.integers(0, 2))
def test_substitute_scales_area(name, n):
    rule = builtin(name)
    lab = rule.labels[0]
    p = substitute(rule, Patch.single(rule, lab), n)
    assert p.area2(rule) == g.signed_area2(rule.shapes[lab]) * rule.det_expansion() ** n
    # iterating is the same as substituting in one go
    q = substitute(rule, substitute(rule, Patch.single(rule, lab), 1), n)
    assert q == substitute(rule, Patch.single(rule, lab), n + 1)


@settings(max_examples=30, deadline=None)
@given(st.text(alphabet="ab", min_size=1, max_size=6), st.integers(0, 4))
def test_substitute_word_length(word, n):
    rule = builtin("fibonacci")
    counts = rule.abelianization() ** n
    out = substitute(rule, word, n)
    expect = sum(sum(counts.row(rule.index[c])) for c in word)
    assert len(out) == expect


def test_closure_1d():
    assert adjacency_closure(builtin("silver-mean")) == {("a", "b"), ("b", "a"), ("b", "b")}
    assert adjacency_closure(one_d("ab", "a")) == {("a", "b"), ("b", "a"), ("a", "a")}


def test_closure_solenoid():
    contacts = adjacency_closure(builtin("solenoid"))
    edges = {c.offset for c in contacts if c.kind == "edge"}
    assert edges == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    # lexicographically positive representatives: the right and the top neighbour
    assert {o for o in edges if g.lex_positive(o)} == {(1, 0), (0, 1)}


def test_closure_is_symmetric():
    for name in ("half-hex", "chair"):
        cs = adjacency_closure(builtin(name))
        assert all(c.reverse() in cs for c in cs)


def test_power_matches_double_substitution():
    rule = builtin("chair")
    sq = rule.power(2)
    for lab in rule.labels:
        a = substitute(rule, Patch.single(rule, lab), 2)
        b = substitute(sq, Patch.single(sq, lab), 1)
        assert sorted(a.tiles) == sorted(b.tiles)
    assert sq.abelianization() == rule.abelianization() ** 2


def three_letter(words, allow=True):
    doc = {"name": "t", "dimension": 1,
           "prototiles": [{"label": lab, "word": list(w)} for lab, w in zip("abc", words)]}
    return parse_rule(json.dumps(doc), allow_nonprimitive=allow)


def test_closed_components_and_restriction():
    from apktheory.substitution import closed_components, recurrent_part

    rule = three_letter(["abc", "bc", "b"])
    assert not rule.primitive
    assert closed_components(rule) == [("b", "c")]
    sub, comps, dropped = recurrent_part(rule)
    assert sub.labels == ("b", "c") and dropped == ["a"]
    assert sub.children == {"b": ("b", "c"), "c": ("b",)}
    two = three_letter(["aa", "bbb", "cab"])
    assert closed_components(two) == [("a",), ("b",)]
    with pytest.raises(NonPrimitiveRule, match="does not expand"):
        recurrent_part(three_letter(["ab", "b", "c"]))


def test_field_scalar_expansion():
    rule = builtin("robinson")
    phi = rule.expansion[0][0]
    assert phi * phi == phi + 1 and rule.expansion[0][1] == 0
    assert len(rule.labels) == 40
    # thin and thick halves: 1 thin + 1 thick, and 1 thin + 2 thick
    m = rule.abelianization()
    rows = {rule.labels[i][0]: sorted(m.row(i)) for i in range(m.rows)}
    assert sum(rows["T"]) == 2 and sum(rows["H"]) == 3
