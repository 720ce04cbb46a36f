"""Synthetic related-language pair for end-to-end runs.

The toy "source" and "target" languages share word order but differ in
three deterministic ways:

* some feminine source nouns are masculine in the target, and the article
  and adjective agreeing with them follow the target gender;
* the preposition ``en`` becomes ``a`` before location names;
* the preterite becomes a present-tense auxiliary ``anar`` plus infinitive.

A word-for-word translation through the generated dictionary gets all three
wrong, so rules learned from the parallel corpus have something to fix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bidix import DictEntry, DictSide
from .corpus_io import AnalyzedSentence, LexicalForm

LEXICALIZED = ("det", "pr", "vaux")

# (source lemma, target lemma, source gender, target gender)
NOUNS = [
    ("calle", "carrer", "f", "m"),
    ("leche", "llet", "f", "m"),
    ("sal", "sald", "f", "m"),
    ("señal", "senyal", "f", "m"),
    ("costumbre", "costum", "f", "m"),
    ("sangre", "sang", "f", "m"),
    ("nariz", "nas", "f", "m"),
    ("casa", "casa", "f", "f"),
    ("silla", "cadira", "f", "f"),
    ("mesa", "taula", "f", "f"),
    ("libro", "llibre", "m", "m"),
    ("perro", "gos", "m", "m"),
    ("coche", "cotxe", "m", "m"),
    ("árbol", "arbre", "m", "m"),
]
LOCATIONS = [("Francia", "França"), ("Italia", "Itàlia"), ("Londres", "Londres"), ("Suiza", "Suïssa")]
ADJECTIVES = [("rojo", "roig"), ("nuevo", "nou"), ("viejo", "vell"), ("grande", "gran")]
VERBS = [("vivir", "viure"), ("trabajar", "treballar"), ("comer", "menjar"), ("dormir", "dormir")]
OOV_NOUNS = [("zorro", "m"), ("nube", "f")]


def dictionary_entries() -> list[DictEntry]:
    entries = []

    def add(sl, tl):
        entries.append(DictEntry(sl, tl, len(entries) + 1))

    add(DictSide("el", "det"), DictSide("el", "det"))
    add(DictSide("en", "pr"), DictSide("en", "pr"))
    add(DictSide("de", "pr"), DictSide("de", "pr"))
    for sl, tl, g_sl, g_tl in NOUNS:
        if g_sl != g_tl:
            add(DictSide(sl, "noun", (g_sl,)), DictSide(tl, "noun", (g_tl,)))
        else:
            add(DictSide(sl, "noun"), DictSide(tl, "noun"))
    for sl, tl in LOCATIONS:
        add(DictSide(sl, "noun"), DictSide(tl, "noun"))
    for sl, tl in ADJECTIVES:
        add(DictSide(sl, "adj"), DictSide(tl, "adj"))
    for sl, tl in VERBS:
        add(DictSide(sl, "verb"), DictSide(tl, "verb"))
    return entries


@dataclass
class _NP:
    src: list
    tgt: list


class FixtureGenerator:
    def __init__(self, seed: int = 0, oov_rate: float = 0.0):
        self.rng = random.Random(seed)
        self.oov_rate = oov_rate

    def _np(self, with_adj: bool) -> _NP:
        rng = self.rng
        number = rng.choice(["sg", "pl"])
        if self.oov_rate and rng.random() < self.oov_rate:
            lemma, g = rng.choice(OOV_NOUNS)
            sl_noun = LexicalForm(lemma, "noun", (g, number))
            return _NP([LexicalForm("el", "det", ("def", g, number)), sl_noun],
                       [LexicalForm("el", "det", ("def", g, number)), LexicalForm(lemma, "noun", (g, number))])
        sl, tl, g_sl, g_tl = rng.choice(NOUNS)
        src = [LexicalForm("el", "det", ("def", g_sl, number)), LexicalForm(sl, "noun", (g_sl, number))]
        tgt = [LexicalForm("el", "det", ("def", g_tl, number)), LexicalForm(tl, "noun", (g_tl, number))]
        if with_adj:
            a_sl, a_tl = rng.choice(ADJECTIVES)
            src.append(LexicalForm(a_sl, "adj", (g_sl, number)))
            tgt.append(LexicalForm(a_tl, "adj", (g_tl, number)))
        return _NP(src, tgt)

    def _verb(self, number: str):
        sl, tl = self.rng.choice(VERBS)
        if self.rng.random() < 0.5:
            return ([LexicalForm(sl, "verb", ("pret", "3rd", number))],
                    [LexicalForm("anar", "vaux", ("pres", "3rd", number)), LexicalForm(tl, "verb", ("inf",))])
        return ([LexicalForm(sl, "verb", ("pres", "3rd", number))],
                [LexicalForm(tl, "verb", ("pres", "3rd", number))])

    def _pp(self) -> _NP:
        if self.rng.random() < 0.5:
            sl, tl = self.rng.choice(LOCATIONS)
            return _NP([LexicalForm("en", "pr"), LexicalForm(sl, "noun", ("loc",))],
                       [LexicalForm("a", "pr"), LexicalForm(tl, "noun", ("loc",))])
        np_ = self._np(self.rng.random() < 0.5)
        prep = self.rng.choice(["en", "de"])
        return _NP([LexicalForm(prep, "pr")] + np_.src, [LexicalForm(prep, "pr")] + np_.tgt)

    def pair(self) -> tuple[AnalyzedSentence, AnalyzedSentence]:
        rng = self.rng
        shape = rng.randrange(4)
        subj = self._np(rng.random() < 0.6)
        number = subj.src[1].inflection[-1]
        v_src, v_tgt = self._verb(number)
        src, tgt = list(subj.src) + v_src, list(subj.tgt) + v_tgt
        if shape in (0, 1):
            pp = self._pp()
            src += pp.src
            tgt += pp.tgt
        if shape == 2:
            obj = self._np(True)
            src += obj.src
            tgt += obj.tgt
        if shape == 3 and rng.random() < 0.5:
            pp = self._pp()
            src += pp.src
            tgt += pp.tgt
        return AnalyzedSentence(tuple(src)), AnalyzedSentence(tuple(tgt))

    def corpus(self, size: int) -> tuple[list[AnalyzedSentence], list[AnalyzedSentence]]:
        pairs = [self.pair() for _ in range(size)]
        return [s for s, _ in pairs], [t for _, t in pairs]


def generate(size: int, seed: int = 0, oov_rate: float = 0.0):
    """``size`` sentence pairs as two parallel lists of analyzed sentences."""
    return FixtureGenerator(seed, oov_rate).corpus(size)
