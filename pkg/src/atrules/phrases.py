"""Bilingual phrase-pair extraction from word-aligned sentence pairs."""

from __future__ import annotations

from dataclasses import dataclass

from .aligner import AlignmentMatrix
from .corpus_io import LexicalForm, SentencePair, format_analyzed_line, parse_analyzed_line

MAX_SOURCE_LEN = 7


@dataclass(frozen=True)
class PhrasePair:
    """A source span and a target span with the links inside them, re-based
    to span-local ``(i, j)`` coordinates."""

    source_start: int
    target_start: int
    source: tuple[LexicalForm, ...]
    target: tuple[LexicalForm, ...]
    links: frozenset[tuple[int, int]]

    @property
    def source_len(self) -> int:
        return len(self.source)

    @property
    def target_len(self) -> int:
        return len(self.target)

    @property
    def source_span(self) -> tuple[int, int]:
        return self.source_start, self.source_start + len(self.source) - 1

    @property
    def target_span(self) -> tuple[int, int]:
        return self.target_start, self.target_start + len(self.target) - 1

    def sort_key(self):
        return self.source_start, len(self.source), self.target_start, len(self.target)

    def dump(self) -> str:
        links = " ".join(f"{j}-{i}" for j, i in sorted((j, i) for i, j in self.links))
        return f"{format_analyzed_line(self.source)} ||| {format_analyzed_line(self.target)} ||| {links}"


def extract_phrases(pair: SentencePair, alignment: AlignmentMatrix, max_source_len: int = MAX_SOURCE_LEN) -> list[PhrasePair]:
    """All consistent phrase pairs whose four boundary words are aligned
    inside the pair, up to ``max_source_len`` source words.

    Returned in canonical (source start, source length, target start, target
    length) order.  Because the boundary words must be aligned, every valid
    source span has exactly one target span: the hull of its links.
    """
    m, n = len(pair.source), len(pair.target)
    if (alignment.source_len, alignment.target_len) != (m, n):
        raise ValueError("alignment dimensions do not match the sentence pair")
    by_source: list[list[int]] = [[] for _ in range(m)]
    by_target: list[list[int]] = [[] for _ in range(n)]
    for i, j in alignment.links:
        by_source[j].append(i)
        by_target[i].append(j)

    out = []
    for j1 in range(m):
        if not by_source[j1]:
            continue
        lo, hi = n, -1
        for j2 in range(j1, min(m, j1 + max_source_len)):
            for i in by_source[j2]:
                lo = min(lo, i)
                hi = max(hi, i)
            if not by_source[j2]:
                continue
            if all(j1 <= j <= j2 for i in range(lo, hi + 1) for j in by_target[i]):
                links = frozenset(
                    (i - lo, j - j1) for i, j in alignment.links if j1 <= j <= j2
                )
                out.append(PhrasePair(
                    j1, lo, tuple(pair.source.tokens[j1:j2 + 1]), tuple(pair.target.tokens[lo:hi + 1]), links
                ))
    out.sort(key=PhrasePair.sort_key)
    return out


def dump_phrases(phrases) -> str:
    return "".join(p.dump() + "\n" for p in phrases)


def parse_phrase_dump(text: str) -> list[PhrasePair]:
    """Read phrases written by :func:`dump_phrases`.  Span offsets are not
    part of the dump and come back as 0."""
    out = []
    for k, line in enumerate(text.split("\n"), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split(" ||| ")
        if len(parts) != 3:
            raise ValueError(f"phrase dump line {k}: expected 3 fields")
        src = parse_analyzed_line(parts[0]).tokens
        tgt = parse_analyzed_line(parts[1]).tokens
        links = set()
        for item in parts[2].split():
            j, _, i = item.partition("-")
            links.add((int(i), int(j)))
        out.append(PhrasePair(0, 0, src, tgt, frozenset(links)))
    return out
