"""Plain-text reports (with JSON-ready twins) for rule bases, statistics,
discards and translation traces."""

from __future__ import annotations

import json
from collections import Counter

from .corpus_io import format_token
from .engine import DEFAULT, TraceEvent
from .rulegen import RuleBase


def rulebase_data(rulebase: RuleBase) -> dict:
    rules = []
    for rule in rulebase.rules:
        rules.append({
            "pattern": [wc.pretty() for wc in rule.pattern],
            "candidates": [
                {
                    "count": ct.count,
                    "target": [wc.pretty() for wc in ct.template.tl_classes],
                    "alignment": [f"{i}-{j}" for i, j in ct.template.alignment],
                    "restrictions": [str(r) for r in ct.template.restrictions],
                }
                for ct in rule.candidates
            ],
        })
    return {"summary": rulebase.summary(), "lexicalized": sorted(rulebase.lexicalized), "rules": rules}


def report_rulebase(rulebase: RuleBase) -> str:
    """One block per rule, in serialized order.  Lexicalized classes are
    shown as ``**lemma**-(tags)``."""
    if not rulebase.rules:
        return ""
    lines = []
    summary = rulebase.summary()
    lines.append(f"{summary['rules']} rules, {summary['templates']} templates")
    lines.append("rules by length: " + ", ".join(f"{k}: {v}" for k, v in summary["rules_by_length"].items()))
    for n, rule in enumerate(rulebase.rules, 1):
        lines.append("")
        lines.append(f"rule {n}: " + " ".join(wc.pretty() for wc in rule.pattern))
        for k, ct in enumerate(rule.candidates, 1):
            z = ct.template
            lines.append(f"  {k}. [{ct.count}] " + " ".join(wc.pretty() for wc in z.tl_classes))
            lines.append("       align " + " ".join(f"{i}-{j}" for i, j in z.alignment))
            if z.restrictions:
                lines.append("       where " + ", ".join(f"w{r.position + 1}={r.pattern}" for r in z.restrictions))
        lines.append(f"  {len(rule.candidates) + 1}. default: word for word")
    return "\n".join(lines) + "\n"


def report_statistics(stats: dict) -> str:
    lines = [
        f"sentences               {stats['sentences']}",
        f"words                   {stats['words']}",
        f"rules generated         {stats['rules_generated']}",
        f"rules used              {stats['rules_used']}",
        f"% used                  {stats['rules_used_pct']:.2f}",
        f"rule applications       {stats['rule_applications']}",
        f"% word-for-word         {stats['default_pct']:.2f}",
        f"OOV words               {stats['oov_words']}",
        f"OOV %                   {stats['oov_pct']:.2f}",
        "",
        "length  rules   used  applications  word-for-word",
    ]
    for n, row in stats["by_length"].items():
        lines.append(f"{n:>6} {row['rules']:>6} {row['used']:>6} {row['applications']:>13} {row['default_applications']:>14}")
    return "\n".join(lines) + "\n"


def report_discards(tally: dict) -> str:
    total = tally.get("total", 0)
    lines = [f"{'phrase pairs':<26}{total}"]
    for reason in sorted(k for k in tally if k != "total"):
        pct = 100.0 * tally[reason] / total if total else 0.0
        lines.append(f"{reason:<26}{tally[reason]} ({pct:.2f}%)")
    return "\n".join(lines) + "\n"


def report_trace(sentence, trace: list[TraceEvent]) -> str:
    lines = []
    for ev in trace:
        words = " ".join(format_token(w) for w in sentence[ev.start:ev.start + ev.length])
        if ev.rule is None:
            what = "no rule"
        elif ev.applied == DEFAULT:
            what = "rule, default (word for word)"
        else:
            what = f"rule, candidate {ev.applied + 1}"
        lines.append(f"[{ev.start}:{ev.start + ev.length}] {what}: {words}")
        for k, reason in ev.failures:
            lines.append(f"    candidate {k + 1} rejected: {reason}")
    return "\n".join(lines) + "\n"


def rule_length_histogram(rulebase: RuleBase) -> dict[int, int]:
    return dict(sorted(Counter(r.length for r in rulebase.rules).items()))


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
