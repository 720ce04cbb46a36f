"""Transfer rules: templates grouped by SL pattern, and the rule file format.

Rule file grammar (UTF-8, line oriented)::

    #atrules-rules 1
    #lexicalized <cat> <cat> ...
    #meta <key> <value>            (zero or more, preserved verbatim)
    RULE <S>
    AT <count> ||| <T> ||| <A> ||| <R>     (zero or more, best first)
    DEFAULT
    END

``<S>``/``<T>`` are word-class sequences (``^en<pr>$`` lexicalized,
``^<noun><loc>$`` morphological), ``<A>`` is ``i-j`` links (TL-SL), ``<R>``
is ``pos:category.tag.*`` restrictions.  Every rule ends with the implicit
word-for-word default.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .templates import AlignmentTemplate, CountedTemplate, WordClass, parse_classes, render_classes

FORMAT_VERSION = 1
MAGIC = "#atrules-rules"


class RuleFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"rule file line {line}: {message}")


def _candidate_key(ct: CountedTemplate):
    return -ct.count, ct.template.serialize()


@dataclass(frozen=True)
class TransferRule:
    pattern: tuple[WordClass, ...]
    candidates: tuple[CountedTemplate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(self.pattern))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        for ct in self.candidates:
            if ct.template.sl_classes != self.pattern:
                raise ValueError("candidate SL classes differ from the rule pattern")
        keys = [_candidate_key(ct) for ct in self.candidates]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("candidates must be strictly ordered by (count desc, serialization)")

    @property
    def length(self) -> int:
        return len(self.pattern)

    def pattern_text(self) -> str:
        return render_classes(self.pattern)


@dataclass
class RuleBase:
    rules: list[TransferRule]
    lexicalized: frozenset[str] = frozenset()
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.lexicalized = frozenset(self.lexicalized)
        seen = set()
        for r in self.rules:
            if r.pattern in seen:
                raise ValueError(f"duplicate rule pattern {r.pattern_text()}")
            seen.add(r.pattern)

    def __len__(self) -> int:
        return len(self.rules)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RuleBase):
            return NotImplemented
        return (self.rules, self.lexicalized, self.meta) == (other.rules, other.lexicalized, other.meta)

    def summary(self) -> dict:
        by_len = Counter(r.length for r in self.rules)
        return {
            "rules": len(self.rules),
            "templates": sum(len(r.candidates) for r in self.rules),
            "rules_by_length": {str(k): by_len[k] for k in sorted(by_len)},
        }


def build_rules(selected: Iterable[CountedTemplate]) -> list[TransferRule]:
    groups: dict[tuple[WordClass, ...], list[CountedTemplate]] = {}
    for ct in selected:
        groups.setdefault(ct.template.sl_classes, []).append(ct)
    rules = []
    for pattern, cands in groups.items():
        merged: dict[AlignmentTemplate, int] = {}
        for ct in cands:
            merged[ct.template] = merged.get(ct.template, 0) + ct.count
        ordered = sorted((CountedTemplate(t, c) for t, c in merged.items()), key=_candidate_key)
        rules.append(TransferRule(pattern, tuple(ordered)))
    rules.sort(key=lambda r: (-r.length, r.pattern_text()))
    return rules


def serialize_rules(rulebase: RuleBase) -> str:
    lines = [f"{MAGIC} {FORMAT_VERSION}", "#lexicalized " + " ".join(sorted(rulebase.lexicalized))]
    for k in sorted(rulebase.meta):
        lines.append(f"#meta {k} {rulebase.meta[k]}")
    for rule in rulebase.rules:
        lines.append("RULE " + rule.pattern_text())
        for ct in rule.candidates:
            z = ct.template
            a = " ".join(f"{i}-{j}" for i, j in z.alignment)
            r = " ".join(str(x) for x in z.restrictions)
            lines.append(f"AT {ct.count} ||| {render_classes(z.tl_classes)} ||| {a} ||| {r}")
        lines.append("DEFAULT")
        lines.append("END")
    return "\n".join(lines) + "\n"


def parse_rules(text: str) -> RuleBase:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    k = 0
    while k < len(lines) and lines[k].startswith("#atrules") and not lines[k].startswith(MAGIC):
        k += 1
    if k >= len(lines) or not lines[k].startswith(MAGIC):
        raise RuleFormatError(f"missing '{MAGIC}' header", k + 1)
    try:
        version = int(lines[k].split()[1])
    except (IndexError, ValueError):
        raise RuleFormatError("malformed version header", k + 1) from None
    if version != FORMAT_VERSION:
        raise RuleFormatError(f"unsupported format version {version}", k + 1)
    k += 1
    lexicalized: frozenset[str] = frozenset()
    meta: dict[str, str] = {}
    rules: list[TransferRule] = []
    pattern = None
    cands: list[CountedTemplate] = []
    saw_default = False
    for lineno in range(k + 1, len(lines) + 1):
        line = lines[lineno - 1]
        try:
            if line.startswith("#lexicalized"):
                lexicalized = frozenset(line.split()[1:])
            elif line.startswith("#meta "):
                _, key, value = (line.split(" ", 2) + [""])[:3]
                meta[key] = value
            elif line.startswith("#") or not line.strip():
                continue
            elif line.startswith("RULE "):
                if pattern is not None:
                    raise RuleFormatError("RULE before END", lineno)
                pattern = parse_classes(line[5:])
                if not pattern:
                    raise RuleFormatError("empty pattern", lineno)
                cands, saw_default = [], False
            elif line.startswith("AT "):
                if pattern is None or saw_default:
                    raise RuleFormatError("AT outside a rule or after DEFAULT", lineno)
                count, _, rest = line[3:].partition(" ||| ")
                z = AlignmentTemplate.parse(render_classes(pattern) + " ||| " + rest)
                cands.append(CountedTemplate(z, int(count)))
            elif line == "DEFAULT":
                if pattern is None:
                    raise RuleFormatError("DEFAULT outside a rule", lineno)
                saw_default = True
            elif line == "END":
                if pattern is None or not saw_default:
                    raise RuleFormatError("END without RULE/DEFAULT", lineno)
                rules.append(TransferRule(pattern, tuple(cands)))
                pattern = None
            else:
                raise RuleFormatError(f"unrecognized line {line!r}", lineno)
        except RuleFormatError:
            raise
        except ValueError as exc:
            raise RuleFormatError(str(exc), lineno) from None
    if pattern is not None:
        raise RuleFormatError("unterminated rule at end of file", len(lines))
    try:
        return RuleBase(rules, lexicalized, meta)
    except ValueError as exc:
        raise RuleFormatError(str(exc), len(lines)) from None


def load_rules(path) -> RuleBase:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read())


def write_rules(path, rulebase: RuleBase) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_rules(rulebase))
