"""Shallow-transfer engine: longest-match rule detection and template application."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bidix import BilingualDictionary, lookup, restriction_satisfied
from .corpus_io import AnalyzedSentence, LexicalForm
from .rulegen import RuleBase, TransferRule
from .templates import AlignmentTemplate, WordClass, word_class

DEFAULT = -1


class TemplateApplicationError(RuntimeError):
    """A template was applied although a dictionary lookup it needs fails."""


class PatternMatcher:
    """Prefix trie over word-class sequences."""

    def __init__(self, rules: Iterable[TransferRule]):
        self.root: dict = {}
        self.max_length = 0
        for rule in rules:
            node = self.root
            for wc in rule.pattern:
                node = node.setdefault(wc, {})
            if None in node:
                raise ValueError(f"ambiguous rule base: pattern {rule.pattern_text()} occurs twice")
            node[None] = rule
            self.max_length = max(self.max_length, rule.length)

    def lookup(self, pattern: Sequence[WordClass]) -> TransferRule | None:
        node = self.root
        for wc in pattern:
            node = node.get(wc)
            if node is None:
                return None
        return node.get(None)

    def longest(self, classes: Sequence[WordClass | None], start: int) -> TransferRule | None:
        node = self.root
        best = None
        for k in range(start, len(classes)):
            wc = classes[k]
            if wc is None:
                break
            node = node.get(wc)
            if node is None:
                break
            if None in node:
                best = node[None]
        return best


@dataclass(frozen=True)
class TraceEvent:
    start: int
    length: int
    rule: TransferRule | None = None
    applied: int | None = None  # candidate index, DEFAULT, or None for no rule
    failures: tuple[tuple[int, str], ...] = ()

    @property
    def used_default(self) -> bool:
        return self.applied == DEFAULT


def sentence_classes(sentence: Sequence[LexicalForm], lexicalized_cats, dictionary: BilingualDictionary | None = None):
    """Word classes of a sentence; ``None`` marks words that cannot take part
    in any pattern (non-lexicalized dictionary misses)."""
    out = []
    for w in sentence:
        if w.unknown:
            out.append(None)
        elif dictionary is not None and w.category not in lexicalized_cats and lookup(dictionary, w) is None:
            out.append(None)
        else:
            out.append(word_class(w, lexicalized_cats))
    return out


def match_sentence(matcher: PatternMatcher, sentence: Sequence[LexicalForm], lexicalized_cats,
                   dictionary: BilingualDictionary | None = None) -> list[tuple[tuple[int, int], TransferRule | None]]:
    """Left-to-right longest-match segmentation into ``((start, length), rule)``."""
    classes = sentence_classes(sentence, lexicalized_cats, dictionary)
    out = []
    pos = 0
    while pos < len(classes):
        rule = matcher.longest(classes, pos)
        if rule is None:
            out.append(((pos, 1), None))
            pos += 1
        else:
            out.append(((pos, rule.length), rule))
            pos += rule.length
    return out


def word_for_word(sl_words: Iterable[LexicalForm], dictionary: BilingualDictionary) -> list[LexicalForm]:
    out = []
    for w in sl_words:
        tr = lookup(dictionary, w)
        if tr is None:
            out.append(LexicalForm(w.lemma, w.category, w.inflection, unknown=True))
        else:
            out.append(LexicalForm(tr.lemma, tr.category, tr.tags))
    return out


def apply_template(t: AlignmentTemplate, sl_words: Sequence[LexicalForm], dictionary: BilingualDictionary) -> list[LexicalForm]:
    out = []
    for i, wc in enumerate(t.tl_classes):
        if wc.lexicalized:
            out.append(wc.form())
            continue
        j = t.source_of(i)
        tr = lookup(dictionary, sl_words[j]) if j is not None else None
        if tr is None:
            raise TemplateApplicationError(f"no translation for TL position {i} of {t.serialize()}")
        out.append(LexicalForm(tr.lemma, wc.category, wc.tags))
    return out


def _check_candidate(t: AlignmentTemplate, sl_words: Sequence[LexicalForm], dictionary: BilingualDictionary) -> str | None:
    """Reason the template cannot apply, or ``None`` if it can."""
    for r in t.restrictions:
        j = t.source_of(r.position)
        tr = lookup(dictionary, sl_words[j]) if j is not None else None
        if tr is None:
            return f"{r}: no dictionary translation"
        if not restriction_satisfied(r, tr.category, tr.tags):
            return f"{r}: got {'.'.join((tr.category,) + tr.tags)}"
    for i, wc in enumerate(t.tl_classes):
        if wc.lexicalized:
            continue
        j = t.source_of(i)
        if j is None or lookup(dictionary, sl_words[j]) is None:
            return f"TL position {i}: no dictionary translation"
    return None


def apply_rule(rule: TransferRule, sl_words: Sequence[LexicalForm], dictionary: BilingualDictionary,
               start: int = 0) -> tuple[list[LexicalForm], TraceEvent]:
    failures = []
    for k, ct in enumerate(rule.candidates):
        reason = _check_candidate(ct.template, sl_words, dictionary)
        if reason is None:
            out = apply_template(ct.template, sl_words, dictionary)
            return out, TraceEvent(start, len(sl_words), rule, k, tuple(failures))
        failures.append((k, reason))
    return word_for_word(sl_words, dictionary), TraceEvent(start, len(sl_words), rule, DEFAULT, tuple(failures))


def translate_sentence(sentence: Sequence[LexicalForm], rulebase: RuleBase, dictionary: BilingualDictionary,
                       matcher: PatternMatcher | None = None) -> tuple[list[LexicalForm], list[TraceEvent]]:
    if matcher is None:
        matcher = PatternMatcher(rulebase.rules)
    words = list(sentence)
    out: list[LexicalForm] = []
    trace = []
    for (start, length), rule in match_sentence(matcher, words, rulebase.lexicalized, dictionary):
        span = words[start:start + length]
        if rule is None:
            out.extend(word_for_word(span, dictionary))
            trace.append(TraceEvent(start, length))
        else:
            tl, ev = apply_rule(rule, span, dictionary, start)
            out.extend(tl)
            trace.append(ev)
    return out, trace


@dataclass
class TranslationStats:
    sentences: int = 0
    words: int = 0
    oov: int = 0
    rules_total: int = 0
    rule_applications: int = 0
    default_applications: int = 0
    applications_by_length: Counter = field(default_factory=Counter)
    default_by_length: Counter = field(default_factory=Counter)
    used_patterns: set = field(default_factory=set)
    rules_by_length: Counter = field(default_factory=Counter)

    def add(self, sentence: Sequence[LexicalForm], output: Sequence[LexicalForm], trace: Sequence[TraceEvent]) -> None:
        self.sentences += 1
        self.words += len(sentence)
        self.oov += sum(1 for w in output if w.unknown)
        for ev in trace:
            if ev.rule is None:
                continue
            self.rule_applications += 1
            self.applications_by_length[ev.length] += 1
            self.used_patterns.add(ev.rule.pattern)
            if ev.used_default:
                self.default_applications += 1
                self.default_by_length[ev.length] += 1

    def merge(self, other: "TranslationStats") -> None:
        self.sentences += other.sentences
        self.words += other.words
        self.oov += other.oov
        self.rule_applications += other.rule_applications
        self.default_applications += other.default_applications
        self.applications_by_length.update(other.applications_by_length)
        self.default_by_length.update(other.default_by_length)
        self.used_patterns |= other.used_patterns

    @property
    def rules_used(self) -> int:
        return len(self.used_patterns)

    def to_dict(self) -> dict:
        def pct(a, b):
            return 100.0 * a / b if b else 0.0

        used_by_length = Counter(len(p) for p in self.used_patterns)
        lengths = sorted(set(self.rules_by_length) | set(self.applications_by_length))
        return {
            "sentences": self.sentences,
            "words": self.words,
            "oov_words": self.oov,
            "oov_pct": pct(self.oov, self.words),
            "rules_generated": self.rules_total,
            "rules_used": self.rules_used,
            "rules_used_pct": pct(self.rules_used, self.rules_total),
            "rule_applications": self.rule_applications,
            "default_applications": self.default_applications,
            "default_pct": pct(self.default_applications, self.rule_applications),
            "by_length": {
                str(n): {
                    "rules": self.rules_by_length[n],
                    "used": used_by_length[n],
                    "applications": self.applications_by_length[n],
                    "default_applications": self.default_by_length[n],
                }
                for n in lengths
            },
        }


def translate_corpus(rulebase: RuleBase, corpus: Sequence[AnalyzedSentence], dictionary: BilingualDictionary,
                     workers: int = 1, with_trace: bool = False):
    """Translate every sentence.  Returns ``(sentences, stats)`` or, with
    ``with_trace``, ``(sentences, stats, traces)``.  Output does not depend on
    ``workers``."""
    matcher = PatternMatcher(rulebase.rules)

    def one(sentence):
        return translate_sentence(sentence.tokens, rulebase, dictionary, matcher)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, corpus))
    else:
        results = [one(s) for s in corpus]

    stats = TranslationStats(rules_total=len(rulebase.rules),
                             rules_by_length=Counter(r.length for r in rulebase.rules))
    out = []
    traces = []
    for sentence, (tl, trace) in zip(corpus, results):
        stats.add(sentence.tokens, tl, trace)
        out.append(AnalyzedSentence(tuple(tl)))
        traces.append(trace)
    if with_trace:
        return out, stats, traces
    return out, stats
