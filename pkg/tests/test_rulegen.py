import pytest
from hypothesis import given, settings, strategies as st

from atrules.rulegen import RuleBase, RuleFormatError, TransferRule, build_rules, parse_rules, serialize_rules
from atrules.templates import AlignmentTemplate, CountedTemplate, WordClass
from test_templates import templates_

N, V, ADJ = WordClass("n"), WordClass("v"), WordClass("adj")
EN = WordClass("pr", (), "en")


def _ct(sl, tl, count, links=None):
    links = links if links is not None else [(k, k) for k in range(min(len(sl), len(tl)))]
    return CountedTemplate(AlignmentTemplate(tuple(sl), tuple(tl), tuple(links)), count)


def test_grouping_by_pattern():
    a = _ct([N, ADJ], [ADJ, N], 9, [(0, 1), (1, 0)])
    b = _ct([N, ADJ], [N, ADJ], 4)
    c = _ct([N], [N], 12)
    rules = build_rules([b, c, a])
    assert [r.pattern for r in rules] == [(N, ADJ), (N,)]
    assert rules[0].candidates == (a, b)


def test_duplicate_templates_are_merged():
    [rule] = build_rules([_ct([N], [N], 3), _ct([N], [N], 4)])
    assert rule.candidates == (_ct([N], [N], 7),)


def test_count_ties_broken_by_serialization():
    x, y = _ct([N], [ADJ], 5), _ct([N], [V], 5)
    [rule] = build_rules([y, x])
    assert [c.template.serialize() for c in rule.candidates] == sorted([x.template.serialize(), y.template.serialize()])


def test_empty_input():
    assert build_rules([]) == []
    rb = RuleBase([], {"pr"})
    assert parse_rules(serialize_rules(rb)) == rb


def test_lengths_one_to_seven():
    cts = [_ct([N] * k, [N] * k, 1) for k in range(1, 8)]
    assert [r.length for r in build_rules(cts)] == [7, 6, 5, 4, 3, 2, 1]


def test_rule_validation():
    with pytest.raises(ValueError):
        TransferRule((N,), (_ct([V], [V], 1),))
    with pytest.raises(ValueError):
        TransferRule((N,), (_ct([N], [N], 1), _ct([N], [V], 2)))
    with pytest.raises(ValueError):
        RuleBase([TransferRule((N,)), TransferRule((N,))])


def test_file_layout():
    rb = RuleBase(build_rules([_ct([EN, N], [WordClass("pr", (), "a"), N], 3)]), {"pr"}, {"threshold": "3"})
    assert serialize_rules(rb) == (
        "#atrules-rules 1\n"
        "#lexicalized pr\n"
        "#meta threshold 3\n"
        "RULE ^en<pr>$ ^<n>$\n"
        "AT 3 ||| ^a<pr>$ ^<n>$ ||| 0-0 1-1 ||| \n"
        "DEFAULT\n"
        "END\n"
    )


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("#atrules-rules 2\n", 1),
    ("#atrules-rules 1\nRULE ^<n>$\nEND\n", 3),
    ("#atrules-rules 1\nRULE ^<n>$\nDEFAULT\n", 3),
    ("#atrules-rules 1\nAT 1 ||| ^<n>$ ||| 0-0 ||| \n", 2),
    ("#atrules-rules 1\nRULE ^<n>$\nAT x ||| ^<n>$ ||| 0-0 ||| \nDEFAULT\nEND\n", 3),
    ("#atrules-rules 1\nbogus\n", 2),
])
def test_malformed_rule_files(text, line):
    with pytest.raises(RuleFormatError) as err:
        parse_rules(text)
    assert err.value.line == line


def test_header_lines_skipped():
    rb = RuleBase(build_rules([_ct([N], [N], 2)]), {"pr"})
    text = "#atrules config=abc\n" + serialize_rules(rb)
    assert parse_rules(text) == rb


@settings(max_examples=1000)
@given(st.lists(st.tuples(templates_(), st.integers(1, 50)), max_size=6),
       st.sets(st.sampled_from(["pr", "det", "vaux"])))
def test_round_trip_and_determinism(items, lex):
    rules = build_rules(CountedTemplate(z, c) for z, c in items)
    rb = RuleBase(rules, lex, {"k": "v w"})
    text = serialize_rules(rb)
    back = parse_rules(text)
    assert back == rb
    assert serialize_rules(back) == text
    assert build_rules(CountedTemplate(z, c) for z, c in reversed(items)) == rules
    assert len({r.pattern for r in rules}) == len(rules)


def test_summary():
    rb = RuleBase(build_rules([_ct([N, N], [N, N], 1), _ct([N], [N], 1), _ct([N], [V], 1)]))
    assert rb.summary() == {"rules": 2, "templates": 3, "rules_by_length": {"1": 1, "2": 1}}
