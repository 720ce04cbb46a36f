"""Analyzed-stream corpus format.

Each sentence is one line of space-separated lexical forms::

    ^vivir<verb><pret><3rd><pl>$ ^en<pr>$ ^Francia<noun><loc>$

The first tag is the lexical category, the rest are inflection tags.  A
backslash escapes ``^ $ < > \\`` inside lemmas.  Dictionary misses produced by
the engine are written with a ``*`` prefix (``^*word<noun>$``); a literal
leading star in a lemma is escaped as ``\\*``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator

# Artifacts written by the toolchain may start with header lines using this
# prefix; every reader skips them.
HEADER_PREFIX = "#atrules"

_META = "^$<>\\"


class ParseError(ValueError):
    """Malformed analyzed line.  ``column`` is a 0-based character offset and
    ``token`` the 1-based index of the offending token."""

    def __init__(self, message: str, column: int, token: int, line: int | None = None, path: str | None = None):
        self.message = message
        self.column = column
        self.token = token
        self.line = line
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = f"token {self.token}, column {self.column}"
        if self.line is not None:
            where = f"line {self.line}, " + where
        if self.path is not None:
            where = f"{self.path}: " + where
        return f"{where}: {self.message}"


@dataclass(frozen=True, order=True)
class LexicalForm:
    lemma: str
    category: str
    inflection: tuple[str, ...] = ()
    unknown: bool = False

    def __post_init__(self):
        if not self.lemma:
            raise ValueError("empty lemma")
        _check_tag(self.category)
        for tag in self.inflection:
            _check_tag(tag)
        if not isinstance(self.inflection, tuple):
            object.__setattr__(self, "inflection", tuple(self.inflection))

    @property
    def tags(self) -> tuple[str, ...]:
        """Category followed by inflection tags."""
        return (self.category,) + self.inflection

    def render(self) -> str:
        return format_token(self)

    def __str__(self) -> str:
        return self.render()


def _check_tag(tag: str) -> None:
    if not tag:
        raise ValueError("empty tag")
    if any(c.isspace() or c in "<>" for c in tag):
        raise ValueError(f"invalid tag {tag!r}")


@dataclass(frozen=True)
class AnalyzedSentence:
    tokens: tuple[LexicalForm, ...]

    def __post_init__(self):
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise ValueError("sentence has no tokens")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[LexicalForm]:
        return iter(self.tokens)

    def __getitem__(self, item):
        return self.tokens[item]


@dataclass(frozen=True)
class SentencePair:
    source: AnalyzedSentence
    target: AnalyzedSentence
    line_number: int = field(default=0, compare=False)

    def swapped(self) -> "SentencePair":
        return SentencePair(self.target, self.source, self.line_number)


def escape_lemma(lemma: str) -> str:
    out = "".join("\\" + c if c in _META else c for c in lemma)
    if out.startswith("*"):
        out = "\\" + out
    return out


def format_token(form: LexicalForm) -> str:
    star = "*" if form.unknown else ""
    tags = "".join(f"<{t}>" for t in form.tags)
    return f"^{star}{escape_lemma(form.lemma)}{tags}$"


def format_analyzed_line(sentence: AnalyzedSentence | Iterable[LexicalForm]) -> str:
    return " ".join(format_token(t) for t in sentence)


def scan_tokens(line: str, allow_empty_lemma: bool = False) -> list[tuple[str, list[str], bool]]:
    """Split a stream line into ``(lemma, tags, unknown)`` triples.

    With ``allow_empty_lemma`` a token such as ``^<noun><f>$`` is accepted;
    word-class sequences use that form for morphological classes.
    """
    out = []
    pos = 0
    n = len(line)
    index = 0
    while True:
        while pos < n and line[pos].isspace():
            pos += 1
        if pos >= n:
            break
        index += 1
        start = pos
        if line[pos] != "^":
            raise ParseError("expected '^' at token start", pos, index)
        pos += 1
        unknown = False
        if pos < n and line[pos] == "*":
            unknown = True
            pos += 1
        lemma = []
        while pos < n and line[pos] not in "<$":
            c = line[pos]
            if c == "\\":
                if pos + 1 >= n:
                    raise ParseError("dangling escape", pos, index)
                lemma.append(line[pos + 1])
                pos += 2
                continue
            if c == "^":
                raise ParseError("unescaped '^' inside token", pos, index)
            if c == ">":
                raise ParseError("unescaped '>' in lemma", pos, index)
            lemma.append(c)
            pos += 1
        if pos >= n:
            raise ParseError("unterminated token (missing '$')", start, index)
        if not lemma and not allow_empty_lemma:
            raise ParseError("empty lemma", start, index)
        tags = []
        while pos < n and line[pos] == "<":
            close = line.find(">", pos + 1)
            if close < 0:
                raise ParseError("unterminated tag", pos, index)
            tag = line[pos + 1:close]
            if not tag:
                raise ParseError("empty tag", pos, index)
            if any(c.isspace() or c in "<^$\\" for c in tag):
                raise ParseError(f"invalid character in tag {tag!r}", pos, index)
            tags.append(tag)
            pos = close + 1
        if pos >= n or line[pos] != "$":
            raise ParseError("expected '$' after tags", min(pos, n), index)
        if not tags:
            raise ParseError("token has no category tag", start, index)
        pos += 1
        if pos < n and not line[pos].isspace():
            raise ParseError("tokens must be separated by whitespace", pos, index + 1)
        out.append(("".join(lemma), tags, unknown))
    return out


def parse_analyzed_line(line: str) -> AnalyzedSentence:
    triples = scan_tokens(line.rstrip("\n"))
    if not triples:
        raise ParseError("empty line", 0, 0)
    return AnalyzedSentence(tuple(
        LexicalForm(lemma, tags[0], tuple(tags[1:]), unknown) for lemma, tags, unknown in triples
    ))


def strip_header(lines: list[str]) -> tuple[list[str], list[str]]:
    """Split leading ``#atrules`` header lines from content lines."""
    k = 0
    while k < len(lines) and lines[k].startswith(HEADER_PREFIX):
        k += 1
    return lines[:k], lines[k:]


def read_lines(path: str | os.PathLike) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return strip_header(lines)[1]


def load_corpus(path: str | os.PathLike) -> list[AnalyzedSentence]:
    out = []
    for k, line in enumerate(read_lines(path), 1):
        try:
            out.append(parse_analyzed_line(line))
        except ParseError as exc:
            raise ParseError(exc.message, exc.column, exc.token, line=k, path=str(path)) from None
    return out


def load_parallel(source_file: str | os.PathLike, target_file: str | os.PathLike) -> list[SentencePair]:
    src = load_corpus(source_file)
    tgt = load_corpus(target_file)
    if len(src) != len(tgt):
        raise ValueError(
            f"line-count mismatch: {source_file} has {len(src)} lines, {target_file} has {len(tgt)}"
        )
    return [SentencePair(s, t, k) for k, (s, t) in enumerate(zip(src, tgt), 1)]


def write_corpus(path: str | os.PathLike, sentences: Iterable[AnalyzedSentence], header: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for h in header:
            fh.write(h + "\n")
        for s in sentences:
            fh.write(format_analyzed_line(s) + "\n")
