"""Bilingual dictionary: parsing, lookup and TL restrictions.

Entries only code the inflection tags that change between languages::

    <e><p>
      <l>calle<s n="noun"/><s n="f"/></l>
      <r>carrer<s n="noun"/><s n="m"/></r>
    </p></e>

Looking up ``calle<noun><f><sg>`` gives ``carrer<noun><m><sg>``: the TL tags
of the entry override the leading inflection slots of the SL word and the
rest is carried over.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .corpus_io import LexicalForm


class DictionaryError(ValueError):
    pass


@dataclass(frozen=True)
class DictSide:
    lemma: str
    category: str
    tags: tuple[str, ...] = ()


@dataclass(frozen=True)
class DictEntry:
    sl: DictSide
    tl: DictSide
    index: int = 0


class Translation(NamedTuple):
    lemma: str
    category: str
    tags: tuple[str, ...]


@dataclass(frozen=True, order=True)
class Restriction:
    """``category.tag1.tag2.*`` constraint on the dictionary translation of
    the SL word aligned to TL position ``position``."""

    position: int
    category: str
    tag_prefix: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.category:
            raise ValueError("restriction needs a category")
        for t in (self.category,) + tuple(self.tag_prefix):
            if not t or "." in t or ":" in t or any(c.isspace() for c in t):
                raise ValueError(f"invalid restriction tag {t!r}")
        if not isinstance(self.tag_prefix, tuple):
            object.__setattr__(self, "tag_prefix", tuple(self.tag_prefix))

    @property
    def pattern(self) -> str:
        return ".".join((self.category,) + self.tag_prefix + ("*",))

    def __str__(self) -> str:
        return f"{self.position}:{self.pattern}"

    @classmethod
    def parse(cls, text: str) -> "Restriction":
        pos, _, pattern = text.partition(":")
        parts = pattern.split(".")
        if not pos or len(parts) < 2 or parts[-1] != "*":
            raise ValueError(f"malformed restriction {text!r}")
        return cls(int(pos), parts[0], tuple(parts[1:-1]))


class BilingualDictionary:
    def __init__(self, entries: Iterable[DictEntry] = (), direction: str = "L1->L2"):
        self.direction = direction
        self._index: dict[tuple[str, str], DictEntry] = {}
        for entry in entries:
            key = (entry.sl.lemma, entry.sl.category)
            if key in self._index:
                other = self._index[key]
                raise DictionaryError(
                    f"duplicate entry for {key[0]}<{key[1]}>: entries {other.index} and {entry.index}"
                )
            self._index[key] = entry

    def __len__(self) -> int:
        return len(self._index)

    def __iter__(self):
        return iter(self._index.values())

    def entry(self, lemma: str, category: str) -> DictEntry | None:
        return self._index.get((lemma, category))

    def entry_for(self, word: LexicalForm) -> DictEntry | None:
        """The entry whose SL side matches ``word`` (lemma, category and
        leading tags), if any."""
        entry = self._index.get((word.lemma, word.category))
        if entry is None or tuple(word.inflection[:len(entry.sl.tags)]) != entry.sl.tags:
            return None
        return entry

    def lookup(self, word: LexicalForm) -> Translation | None:
        return lookup(self, word)


def _side(elem: ET.Element, index: int, side: str) -> DictSide:
    lemma = (elem.text or "").strip()
    tags = [s.get("n", "") for s in elem.findall("s")]
    if not lemma:
        raise DictionaryError(f"entry {index}: missing lemma on <{side}> side")
    if not tags or not tags[0]:
        raise DictionaryError(f"entry {index}: missing category <s> on <{side}> side")
    if any(not t for t in tags):
        raise DictionaryError(f"entry {index}: empty tag on <{side}> side")
    return DictSide(lemma, tags[0], tuple(tags[1:]))


def parse_dictionary(xml: str, direction: str = "L1->L2") -> BilingualDictionary:
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as exc:
        raise DictionaryError(f"malformed XML: {exc}") from None
    if root.tag != "dic":
        raise DictionaryError(f"root element must be <dic>, got <{root.tag}>")
    entries = []
    for index, e in enumerate(root.iter("e"), 1):
        p = e.find("p")
        if p is None or p.find("l") is None or p.find("r") is None:
            raise DictionaryError(f"entry {index}: expected <p><l/><r/></p>")
        entries.append(DictEntry(_side(p.find("l"), index, "l"), _side(p.find("r"), index, "r"), index))
    return BilingualDictionary(entries, direction)


def load_dictionary(path, direction: str = "L1->L2") -> BilingualDictionary:
    with open(path, encoding="utf-8") as fh:
        return parse_dictionary(fh.read(), direction)


def format_dictionary(entries: Iterable[DictEntry]) -> str:
    def side(tag, s):
        lemma = s.lemma.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        syms = "".join(f'<s n="{t}"/>' for t in (s.category,) + s.tags)
        return f"<{tag}>{lemma}{syms}</{tag}>"

    body = "".join(f"  <e><p>{side('l', e.sl)}{side('r', e.tl)}</p></e>\n" for e in entries)
    return f"<dic>\n{body}</dic>\n"


def merge_tags(inflection: Sequence[str], tl_tags: Sequence[str]) -> tuple[str, ...]:
    return tuple(tl_tags) + tuple(inflection[len(tl_tags):])


def lookup(dictionary: BilingualDictionary, word: LexicalForm) -> Translation | None:
    entry = dictionary.entry_for(word)
    if entry is None:
        return None
    return Translation(entry.tl.lemma, entry.tl.category, merge_tags(word.inflection, entry.tl.tags))


def derive_restriction(entry: DictEntry, position: int = 0) -> Restriction:
    return Restriction(position, entry.tl.category, entry.tl.tags)


def restriction_satisfied(r: Restriction, tl_category: str, tl_tags: Sequence[str]) -> bool:
    return tl_category == r.category and tuple(tl_tags[:len(r.tag_prefix)]) == r.tag_prefix


def reproducible(dictionary: BilingualDictionary, phrase, lexicalized_cats) -> bool:
    """Whether word-for-word dictionary lookup can reproduce the lexical
    choices observed in ``phrase``.

    Every non-lexicalized SL word must be in the dictionary, and every link
    reaching a non-lexicalized TL word must connect it to an SL word whose
    translation has that TL lemma.  Lexicalized TL words are copied verbatim
    from templates, so their lemmas are not checked.
    """
    translations = [lookup(dictionary, w) for w in phrase.source]
    for w, tr in zip(phrase.source, translations):
        if w.category not in lexicalized_cats and tr is None:
            return False
    for i, j in phrase.links:
        t = phrase.target[i]
        if t.category in lexicalized_cats:
            continue
        tr = translations[j]
        if tr is None or tr.lemma != t.lemma:
            return False
    return True
