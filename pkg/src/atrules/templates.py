"""Word classes and extended alignment templates."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bidix import BilingualDictionary, Restriction, derive_restriction, reproducible
from .corpus_io import LexicalForm, ParseError, escape_lemma, scan_tokens
from .phrases import PhrasePair


@dataclass(frozen=True, order=True)
class WordClass:
    """A morphological class (category + tags) or, when ``lemma`` is set, a
    single-word class holding a full lexical form."""

    category: str
    tags: tuple[str, ...] = ()
    lemma: str | None = None

    @property
    def lexicalized(self) -> bool:
        return self.lemma is not None

    def form(self) -> LexicalForm:
        if self.lemma is None:
            raise ValueError("morphological class has no lexical form")
        return LexicalForm(self.lemma, self.category, self.tags)

    def render(self) -> str:
        """``^en<pr>$`` for lexicalized classes, ``^<noun><loc>$`` otherwise."""
        lemma = escape_lemma(self.lemma) if self.lemma is not None else ""
        return "^" + lemma + "".join(f"<{t}>" for t in (self.category,) + self.tags) + "$"

    def pretty(self) -> str:
        """Human-readable form; lexicalized classes keep their lemma in bold
        markers, e.g. ``**en**-(pr)`` vs ``(noun.loc)``."""
        tags = ".".join((self.category,) + self.tags)
        if self.lemma is None:
            return f"({tags})"
        return f"**{self.lemma}**-({tags})"

    def __str__(self) -> str:
        return self.render()


def word_class(w: LexicalForm, lexicalized_cats) -> WordClass:
    if w.category in lexicalized_cats:
        return WordClass(w.category, w.inflection, w.lemma)
    return WordClass(w.category, w.inflection)


def render_classes(classes: Sequence[WordClass]) -> str:
    return " ".join(c.render() for c in classes)


def parse_classes(text: str) -> tuple[WordClass, ...]:
    out = []
    for lemma, tags, unknown in scan_tokens(text, allow_empty_lemma=True):
        if unknown:
            raise ParseError("word classes cannot carry the unknown marker", 0, len(out) + 1)
        out.append(WordClass(tags[0], tuple(tags[1:]), lemma or None))
    return tuple(out)


@dataclass(frozen=True)
class AlignmentTemplate:
    """z = (S, T, A, R).  ``alignment`` holds ``(i, j)`` links between TL
    position i and SL position j; ``restrictions`` are keyed by TL position."""

    sl_classes: tuple[WordClass, ...]
    tl_classes: tuple[WordClass, ...]
    alignment: tuple[tuple[int, int], ...]
    restrictions: tuple[Restriction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sl_classes", tuple(self.sl_classes))
        object.__setattr__(self, "tl_classes", tuple(self.tl_classes))
        object.__setattr__(self, "alignment", tuple(sorted(set(self.alignment))))
        object.__setattr__(self, "restrictions", tuple(sorted(set(self.restrictions))))
        m, n = len(self.sl_classes), len(self.tl_classes)
        if not m or not n:
            raise ValueError("template sides must be non-empty")
        for i, j in self.alignment:
            if not (0 <= i < n and 0 <= j < m):
                raise ValueError(f"link {i}-{j} outside template")
        for r in self.restrictions:
            if not 0 <= r.position < n or self.tl_classes[r.position].lexicalized:
                raise ValueError(f"restriction {r} must target a non-lexicalized TL position")

    def aligned_sources(self, i: int) -> list[int]:
        return sorted(j for ii, j in self.alignment if ii == i)

    def source_of(self, i: int) -> int | None:
        """Lowest SL position aligned to TL position ``i``."""
        js = self.aligned_sources(i)
        return js[0] if js else None

    def serialize(self) -> str:
        """``S ||| T ||| A ||| R`` with A as ``i-j`` pairs, R as ``pos:pattern``."""
        a = " ".join(f"{i}-{j}" for i, j in self.alignment)
        r = " ".join(str(x) for x in self.restrictions)
        return f"{render_classes(self.sl_classes)} ||| {render_classes(self.tl_classes)} ||| {a} ||| {r}"

    @classmethod
    def parse(cls, text: str) -> "AlignmentTemplate":
        parts = [p.strip() for p in text.split("|||")]
        if len(parts) != 4:
            raise ValueError(f"template needs 4 '|||' fields, got {len(parts)}")
        s, t, a, r = parts
        links = []
        for item in a.split():
            i, _, j = item.partition("-")
            links.append((int(i), int(j)))
        return cls(parse_classes(s), parse_classes(t), tuple(links), tuple(Restriction.parse(x) for x in r.split()))

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class CountedTemplate:
    template: AlignmentTemplate
    count: int

    @property
    def sl_length(self) -> int:
        return len(self.template.sl_classes)


class DiscardReason(enum.Enum):
    UNALIGNED_NON_LEXICALIZED = "unaligned-non-lexicalized"
    NOT_REPRODUCIBLE = "not-reproducible"


@dataclass(frozen=True)
class Discard:
    reason: DiscardReason


def generalize(phrase: PhrasePair, lexicalized_cats, dictionary: BilingualDictionary) -> AlignmentTemplate | Discard:
    src_aligned = {j for _, j in phrase.links}
    tgt_aligned = {i for i, _ in phrase.links}
    for j, w in enumerate(phrase.source):
        if w.category not in lexicalized_cats and j not in src_aligned:
            return Discard(DiscardReason.UNALIGNED_NON_LEXICALIZED)
    for i, w in enumerate(phrase.target):
        if w.category not in lexicalized_cats and i not in tgt_aligned:
            return Discard(DiscardReason.UNALIGNED_NON_LEXICALIZED)
    if not reproducible(dictionary, phrase, lexicalized_cats):
        return Discard(DiscardReason.NOT_REPRODUCIBLE)

    restrictions = []
    for i, w in enumerate(phrase.target):
        if w.category in lexicalized_cats:
            continue
        j = min(jj for ii, jj in phrase.links if ii == i)
        entry = dictionary.entry_for(phrase.source[j])
        # reproducible() guarantees the entry exists
        restrictions.append(derive_restriction(entry, i))
    return AlignmentTemplate(
        tuple(word_class(w, lexicalized_cats) for w in phrase.source),
        tuple(word_class(w, lexicalized_cats) for w in phrase.target),
        tuple(phrase.links),
        tuple(restrictions),
    )


def count_templates(templates: Iterable[AlignmentTemplate]) -> list[CountedTemplate]:
    counts = Counter(templates)
    keyed = sorted(((-c, t.serialize(), t) for t, c in counts.items()), key=lambda x: (x[0], x[1]))
    return [CountedTemplate(t, -c) for c, _, t in keyed]


def modified_count(count: float, length: int) -> float:
    """c * (1 + ln l); favours longer templates."""
    return count * (1.0 + math.log(length))


SELECTION_MODES = ("raw", "length_scaled")


def template_score(ct: CountedTemplate, mode: str = "raw") -> float:
    if mode == "raw":
        return float(ct.count)
    if mode == "length_scaled":
        return modified_count(ct.count, ct.sl_length)
    raise ValueError(f"unknown selection mode {mode!r}")


def select_templates(counted: Iterable[CountedTemplate], threshold: float, mode: str = "raw") -> list[CountedTemplate]:
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    return [ct for ct in counted if template_score(ct, mode) >= threshold]


def serialize_counted(counted: Iterable[CountedTemplate]) -> str:
    return "".join(f"{ct.count} ||| {ct.template.serialize()}\n" for ct in counted)


def parse_counted(text: str) -> list[CountedTemplate]:
    out = []
    for k, line in enumerate(text.split("\n"), 1):
        if not line.strip() or line.startswith("#"):
            continue
        count, _, rest = line.partition("|||")
        try:
            out.append(CountedTemplate(AlignmentTemplate.parse(rest), int(count)))
        except ValueError as exc:
            raise ValueError(f"template dump line {k}: {exc}") from None
    return out


def learn_templates(phrases: Iterable[PhrasePair], lexicalized_cats, dictionary: BilingualDictionary):
    """Generalize every phrase; return the counted templates and a tally of
    discard reasons (plus the number of phrases seen under ``"total"``)."""
    kept = []
    tally = Counter({"total": 0})
    for phrase in phrases:
        tally["total"] += 1
        z = generalize(phrase, lexicalized_cats, dictionary)
        if isinstance(z, Discard):
            tally[z.reason.value] += 1
        else:
            kept.append(z)
    return count_templates(kept), dict(tally)
