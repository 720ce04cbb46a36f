import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from atrules.aligner import AlignmentMatrix
from atrules.bidix import parse_dictionary
from atrules.corpus_io import AnalyzedSentence, LexicalForm, SentencePair, parse_analyzed_line


def sent(line: str) -> AnalyzedSentence:
    return parse_analyzed_line(line)


def pair(src: str, tgt: str) -> SentencePair:
    return SentencePair(sent(src), sent(tgt))


def plain_pair(src: str, tgt: str) -> SentencePair:
    """Sentence pair from bare words; every word gets category ``w``."""
    return SentencePair(
        AnalyzedSentence(tuple(LexicalForm(w, "w") for w in src.split())),
        AnalyzedSentence(tuple(LexicalForm(w, "w") for w in tgt.split())),
    )


PRET_SOURCE = "^vivir<verb><pret><3rd><pl>$ ^en<pr>$ ^Francia<noun><loc>$"
PRET_TARGET = "^anar<vaux><pres><3rd><pl>$ ^viure<verb><inf>$ ^a<pr>$ ^França<noun><loc>$"
# (target, source): the preterite verb produces both the auxiliary and the infinitive
PRET_LINKS = {(0, 0), (1, 0), (2, 1), (3, 2)}
PRET_LEXICALIZED = {"pr", "vaux"}

PRET_BIDIX = """<dic>
  <e><p><l>vivir<s n="verb"/></l><r>viure<s n="verb"/></r></p></e>
  <e><p><l>Francia<s n="noun"/></l><r>França<s n="noun"/></r></p></e>
  <e><p><l>casa<s n="noun"/></l><r>casa<s n="noun"/></r></p></e>
</dic>"""

GENDER_BIDIX = """<dic>
  <e><p><l>el<s n="det"/></l><r>el<s n="det"/></r></p></e>
  <e><p><l>silla<s n="noun"/></l><r>cadira<s n="noun"/></r></p></e>
  <e><p><l>calle<s n="noun"/><s n="f"/></l><r>carrer<s n="noun"/><s n="m"/></r></p></e>
  <e><p><l>rojo<s n="adj"/></l><r>roig<s n="adj"/></r></p></e>
</dic>"""
GENDER_LEXICALIZED = {"det", "pr"}


@pytest.fixture
def pret_pair():
    return pair(PRET_SOURCE, PRET_TARGET)


@pytest.fixture
def pret_alignment():
    return AlignmentMatrix(frozenset(PRET_LINKS), 3, 4)


@pytest.fixture
def pret_bidix():
    return parse_dictionary(PRET_BIDIX)


@pytest.fixture
def gender_bidix():
    return parse_dictionary(GENDER_BIDIX)


# -- hypothesis strategies ----------------------------------------------------

_lemma_chars = st.sampled_from(list("abcxyzçé ^$<>\\*-_.") + ["ñ"])
lemmas = st.text(_lemma_chars, min_size=1, max_size=8).filter(lambda s: s.strip() == s and s.strip())
tags = st.text(st.sampled_from(list("abcdefgmnpsl0123")), min_size=1, max_size=5)
lexical_forms = st.builds(
    LexicalForm, lemmas, tags, st.lists(tags, max_size=3).map(tuple), st.booleans()
)
sentences = st.lists(lexical_forms, min_size=1, max_size=6).map(lambda xs: AnalyzedSentence(tuple(xs)))
