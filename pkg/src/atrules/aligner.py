"""IBM Model 1 word alignment, symmetrization and Pharaoh-style alignment files."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .corpus_io import SentencePair

NULL = "NULL"
FLOOR = 1e-12
SYMMETRIZATION_METHODS = ("intersection", "union", "refined")


@dataclass
class TranslationTable:
    """t(f|e) for co-occurring key pairs; ``probs[e][f]``.  Keys are rendered
    lexical forms, plus the distinguished :data:`NULL` source key."""

    probs: dict[str, dict[str, float]]
    direction: str = "L1->L2"
    iterations: int = 0

    def prob(self, f: str, e: str) -> float:
        return self.probs.get(e, {}).get(f, 0.0)

    def __getitem__(self, key: tuple[str, str]) -> float:
        f, e = key
        return self.prob(f, e)


@dataclass(frozen=True)
class AlignmentMatrix:
    """Links ``(i, j)``: target position ``i`` aligned to source position ``j``."""

    links: frozenset[tuple[int, int]]
    source_len: int
    target_len: int

    def __post_init__(self):
        if not isinstance(self.links, frozenset):
            object.__setattr__(self, "links", frozenset(self.links))
        for i, j in self.links:
            if not (0 <= i < self.target_len and 0 <= j < self.source_len):
                raise ValueError(f"link ({i},{j}) outside {self.target_len}x{self.source_len}")

    def transposed(self) -> "AlignmentMatrix":
        return AlignmentMatrix(frozenset((j, i) for i, j in self.links), self.target_len, self.source_len)

    def sorted_links(self) -> list[tuple[int, int]]:
        return sorted(self.links)


def _keys(pair: SentencePair) -> tuple[list[str], list[str]]:
    return [t.render() for t in pair.source], [t.render() for t in pair.target]


def _initial_table(corpus: list[tuple[list[str], list[str]]]) -> dict[str, dict[str, float]]:
    cooc: dict[str, dict[str, None]] = {}
    for src, tgt in corpus:
        for e in [NULL] + src:
            row = cooc.setdefault(e, {})
            for f in tgt:
                row[f] = None
    return {e: dict.fromkeys(fs, 1.0 / len(fs)) for e, fs in cooc.items()}


def log_likelihood(pairs: Sequence[SentencePair], table: TranslationTable) -> float:
    """Corpus log-likelihood under Model 1, omitting the constant length term."""
    total = 0.0
    probs = table.probs
    for pair in pairs:
        src, tgt = _keys(pair)
        src = [NULL] + src
        for f in tgt:
            s = sum(probs.get(e, {}).get(f, 0.0) for e in src)
            total += math.log(max(s, FLOOR) / len(src))
    return total


def iter_ibm1(pairs: Sequence[SentencePair], direction: str = "L1->L2") -> Iterator[TranslationTable]:
    """Yield the uniform initial table, then the table after each EM iteration.

    Source words are iterated by position, so repeated words contribute
    repeatedly, as in the original model.
    """
    if not pairs:
        raise ValueError("cannot train on an empty corpus")
    corpus = [_keys(p) for p in pairs]
    probs = _initial_table(corpus)
    it = 0
    yield TranslationTable(probs, direction, it)
    while True:
        counts: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
        for src, tgt in corpus:
            src = [NULL] + src
            rows = [probs[e] for e in src]
            for f in tgt:
                denom = sum(row[f] for row in rows)
                for e, row in zip(src, rows):
                    counts[e][f] += row[f] / denom
        new = {}
        for e, row in counts.items():
            z = sum(row.values())
            new[e] = {f: c / z for f, c in row.items()}
        probs = new
        it += 1
        yield TranslationTable(probs, direction, it)


def train_ibm1(pairs: Sequence[SentencePair], iterations: int = 5, direction: str = "L1->L2") -> TranslationTable:
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    for table in iter_ibm1(pairs, direction):
        if table.iterations == iterations:
            return table
    raise AssertionError("unreachable")


def viterbi_align(pair: SentencePair, table: TranslationTable) -> AlignmentMatrix:
    """Best source position per target word; ties go to the lowest source
    index, and NULL only wins when strictly better."""
    src, tgt = _keys(pair)
    probs = table.probs
    null_row = probs.get(NULL, {})
    links = set()
    for i, f in enumerate(tgt):
        best_j, best_p = -1, -1.0
        for j, e in enumerate(src):
            p = probs.get(e, {}).get(f, FLOOR)
            if p > best_p:
                best_j, best_p = j, p
        if null_row.get(f, FLOOR) > best_p:
            continue
        links.add((i, best_j))
    return AlignmentMatrix(frozenset(links), len(src), len(tgt))


def align_corpus(pairs: Sequence[SentencePair], iterations: int = 5, method: str = "refined") -> list[AlignmentMatrix]:
    """Train both directions, Viterbi-align and symmetrize every pair."""
    fwd = train_ibm1(pairs, iterations, "source->target")
    swapped = [p.swapped() for p in pairs]
    bwd = train_ibm1(swapped, iterations, "target->source")
    out = []
    for pair, rev in zip(pairs, swapped):
        a1 = viterbi_align(pair, fwd)
        a2 = viterbi_align(rev, bwd).transposed()
        out.append(symmetrize(a1, a2, method))
    return out


_NEIGHBOURS = [(-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)]


def symmetrize(a_fwd: AlignmentMatrix, a_bwd: AlignmentMatrix, method: str = "refined") -> AlignmentMatrix:
    if (a_fwd.source_len, a_fwd.target_len) != (a_bwd.source_len, a_bwd.target_len):
        raise ValueError(
            f"dimension mismatch: {a_fwd.target_len}x{a_fwd.source_len} vs {a_bwd.target_len}x{a_bwd.source_len}"
        )
    inter = a_fwd.links & a_bwd.links
    union = a_fwd.links | a_bwd.links
    if method == "intersection":
        links = inter
    elif method == "union":
        links = union
    elif method == "refined":
        links = _refined(inter, union)
    else:
        raise ValueError(f"unknown symmetrization method {method!r}")
    return AlignmentMatrix(frozenset(links), a_fwd.source_len, a_fwd.target_len)


def _refined(inter: frozenset, union: frozenset) -> set[tuple[int, int]]:
    current = set(inter)
    rows = {i for i, _ in current}
    cols = {j for _, j in current}
    candidates = sorted(union - current)
    changed = True
    while changed:
        changed = False
        for i, j in candidates:
            if (i, j) in current:
                continue
            if i in rows and j in cols:
                continue
            if any((i + di, j + dj) in current for di, dj in _NEIGHBOURS):
                current.add((i, j))
                rows.add(i)
                cols.add(j)
                changed = True
    for i, j in candidates:
        if (i, j) not in current and i not in rows and j not in cols:
            current.add((i, j))
            rows.add(i)
            cols.add(j)
    return current


def format_alignment(a: AlignmentMatrix) -> str:
    return " ".join(f"{j}-{i}" for j, i in sorted((j, i) for i, j in a.links))


def export_alignments(alignments: Iterable[AlignmentMatrix]) -> str:
    return "".join(format_alignment(a) + "\n" for a in alignments)


class AlignmentFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def import_alignments(text: str, pairs: Sequence[SentencePair]) -> list[AlignmentMatrix]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    while lines and lines[0].startswith("#atrules"):
        lines.pop(0)
    if len(lines) != len(pairs):
        raise ValueError(f"alignment file has {len(lines)} lines but corpus has {len(pairs)} pairs")
    out = []
    for k, (line, pair) in enumerate(zip(lines, pairs), 1):
        m, n = len(pair.source), len(pair.target)
        links = set()
        for item in line.split():
            try:
                js, is_ = item.split("-")
                j, i = int(js), int(is_)
            except ValueError:
                raise AlignmentFormatError(f"malformed link {item!r}", k) from None
            if not (0 <= j < m and 0 <= i < n):
                raise AlignmentFormatError(f"link {item} out of range for {m}x{n} pair", k)
            links.add((i, j))
        out.append(AlignmentMatrix(frozenset(links), m, n))
    return out
