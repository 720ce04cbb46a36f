import pytest
from hypothesis import given, strategies as st

from atrules.bidix import (
    DictEntry, DictionaryError, DictSide, Restriction, derive_restriction, format_dictionary, lookup,
    parse_dictionary, reproducible, restriction_satisfied,
)
from atrules.corpus_io import LexicalForm
from atrules.phrases import PhrasePair

CASTIGO = """<dic><e><p>
  <l>castigo<s n="noun"/></l>
  <r>càstig<s n="noun"/></r>
</p></e></dic>"""

CALLE = """<dic><e><p>
  <l>calle<s n="noun"/><s n="f"/></l>
  <r>carrer<s n="noun"/><s n="m"/></r>
</p></e></dic>"""


def test_parse_entries():
    [e] = list(parse_dictionary(CASTIGO))
    assert e.sl == DictSide("castigo", "noun") and e.tl == DictSide("càstig", "noun")
    [e] = list(parse_dictionary(CALLE))
    assert e.sl == DictSide("calle", "noun", ("f",)) and e.tl == DictSide("carrer", "noun", ("m",))


def test_empty_dictionary():
    assert len(parse_dictionary("<dic/>")) == 0


@pytest.mark.parametrize("xml, needle", [
    ('<dic><e><p><l><s n="noun"/></l><r>x<s n="noun"/></r></p></e></dic>', "entry 1: missing lemma"),
    ('<dic><e><p><l>x</l><r>y<s n="noun"/></r></p></e></dic>', "entry 1: missing category"),
    ('<dic><e><p><l>x<s n="n"/></l></p></e></dic>', "entry 1"),
    ("<dic><e>", "malformed"),
])
def test_parse_errors(xml, needle):
    with pytest.raises(DictionaryError, match=needle):
        parse_dictionary(xml)


def test_duplicate_key_names_both_entries():
    xml = ('<dic><e><p><l>a<s n="n"/></l><r>b<s n="n"/></r></p></e>'
           '<e><p><l>a<s n="n"/></l><r>c<s n="n"/></r></p></e></dic>')
    with pytest.raises(DictionaryError, match="entries 1 and 2"):
        parse_dictionary(xml)


def test_lookup_only_changes_coded():
    d = parse_dictionary(CALLE)
    assert lookup(d, LexicalForm("calle", "noun", ("f", "sg"))) == ("carrer", "noun", ("m", "sg"))
    d = parse_dictionary(CASTIGO)
    assert lookup(d, LexicalForm("castigo", "noun", ("m", "pl"))) == ("càstig", "noun", ("m", "pl"))
    assert lookup(d, LexicalForm("unknownword", "noun", ("f",))) is None
    assert lookup(d, LexicalForm("castigo", "verb")) is None


def test_lookup_requires_sl_tag_prefix():
    d = parse_dictionary(CALLE)
    assert lookup(d, LexicalForm("calle", "noun", ("m", "sg"))) is None


def test_derive_restriction_castigo_calle():
    assert derive_restriction(next(iter(parse_dictionary(CASTIGO)))).pattern == "noun.*"
    assert derive_restriction(next(iter(parse_dictionary(CALLE)))).pattern == "noun.m.*"
    e = DictEntry(DictSide("x", "noun", ("f", "pl")), DictSide("y", "noun", ("m", "sg")))
    assert derive_restriction(e).pattern == "noun.m.sg.*"


def test_restriction_satisfied():
    r = Restriction(1, "noun", ("m",))
    assert restriction_satisfied(r, "noun", ["m", "sg"])
    assert not restriction_satisfied(r, "noun", ["f", "sg"])
    assert not restriction_satisfied(r, "adj", ["m", "sg"])
    assert restriction_satisfied(Restriction(2, "adj"), "adj", [])


def test_restriction_text_round_trip():
    r = Restriction(3, "verb", ("pret", "3rd"))
    assert str(r) == "3:verb.pret.3rd.*"
    assert Restriction.parse(str(r)) == r
    with pytest.raises(ValueError):
        Restriction.parse("1:noun.m")


_tag = st.sampled_from(["m", "f", "sg", "pl", "nt", "p3"])


@given(st.lists(_tag, max_size=3), st.lists(_tag, max_size=3), st.lists(_tag, max_size=4))
def test_derived_restriction_accepts_own_lookup(sl_tags, tl_tags, rest):
    e = DictEntry(DictSide("w", "noun", tuple(sl_tags)), DictSide("v", "noun", tuple(tl_tags)))
    d = parse_dictionary(format_dictionary([e]))
    tr = lookup(d, LexicalForm("w", "noun", tuple(sl_tags + rest)))
    assert tr is not None
    assert restriction_satisfied(derive_restriction(e), tr.category, tr.tags)


@given(st.lists(_tag, max_size=4), st.lists(_tag, max_size=5), st.integers(0, 3))
def test_restriction_monotone_under_prefix_removal(prefix, tags, drop):
    full = Restriction(0, "noun", tuple(prefix))
    shorter = Restriction(0, "noun", tuple(prefix[:max(0, len(prefix) - drop)]))
    if restriction_satisfied(full, "noun", tags):
        assert restriction_satisfied(shorter, "noun", tags)


def _phrase(src, tgt, links):
    return PhrasePair(0, 0, tuple(src), tuple(tgt), frozenset(links))


VIURE = '<dic><e><p><l>vivir<s n="verb"/></l><r>viure<s n="verb"/></r></p></e></dic>'
HABITAR = '<dic><e><p><l>vivir<s n="verb"/></l><r>habitar<s n="verb"/></r></p></e></dic>'


def test_reproducible():
    src = [LexicalForm("vivir", "verb", ("pret", "3rd", "pl"))]
    tgt = [LexicalForm("anar", "vaux", ("pres", "3rd", "pl")), LexicalForm("viure", "verb", ("inf",))]
    links = {(0, 0), (1, 0)}
    lex = {"vaux"}
    assert reproducible(parse_dictionary(VIURE), _phrase(src, tgt, links), lex)
    assert not reproducible(parse_dictionary(HABITAR), _phrase(src, tgt, links), lex)
    assert not reproducible(parse_dictionary("<dic/>"), _phrase(src, tgt, links), lex)


def test_format_dictionary_round_trip():
    d = parse_dictionary(CALLE)
    again = parse_dictionary(format_dictionary(d))
    assert [(e.sl, e.tl) for e in again] == [(e.sl, e.tl) for e in d]
