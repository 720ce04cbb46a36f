"""BLEU, TER and bootstrap confidence intervals.

Both metrics are single-reference and corpus-level over pooled sufficient
statistics, so a bootstrap resample only needs to re-sum per-sentence tallies.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

Tokens = Sequence[str]

MAX_SHIFT_SIZE = 10


@dataclass(frozen=True)
class MetricScore:
    name: str
    value: float
    tallies: dict = field(default_factory=dict, compare=False)


# -- BLEU --------------------------------------------------------------------

def _ngrams(tokens: Tokens, n: int) -> Counter:
    return Counter(tuple(tokens[k:k + n]) for k in range(len(tokens) - n + 1))


def bleu_stats(hyp: Tokens, ref: Tokens, max_n: int = 4) -> list[int]:
    """``[match_1, total_1, ..., match_n, total_n, hyp_len, ref_len]``."""
    stats = []
    for n in range(1, max_n + 1):
        h = _ngrams(hyp, n)
        r = _ngrams(ref, n)
        stats.append(sum(min(c, r[g]) for g, c in h.items()))
        stats.append(max(len(hyp) - n + 1, 0))
    stats += [len(hyp), len(ref)]
    return stats


def bleu_from_stats(stats: Sequence[float], max_n: int = 4) -> MetricScore:
    matches = list(stats[0:2 * max_n:2])
    totals = list(stats[1:2 * max_n:2])
    hyp_len, ref_len = stats[2 * max_n], stats[2 * max_n + 1]
    tallies = {"matches": matches, "totals": totals, "hyp_len": hyp_len, "ref_len": ref_len}
    if hyp_len == 0 or any(m == 0 for m in matches):
        return MetricScore("BLEU", 0.0, tallies)
    log_p = sum(math.log(m / t) for m, t in zip(matches, totals)) / max_n
    bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    tallies["brevity_penalty"] = bp
    return MetricScore("BLEU", bp * math.exp(log_p), tallies)


def bleu(hyp: Sequence[Tokens], ref: Sequence[Tokens], max_n: int = 4) -> MetricScore:
    if len(hyp) != len(ref):
        raise ValueError(f"corpus size mismatch: {len(hyp)} hypotheses, {len(ref)} references")
    total = np.zeros(2 * max_n + 2, dtype=np.int64)
    for h, r in zip(hyp, ref):
        total += bleu_stats(h, r, max_n)
    return bleu_from_stats(total.tolist(), max_n)


# -- TER ---------------------------------------------------------------------

def edit_distance(hyp: Tokens, ref: Tokens) -> int:
    prev = list(range(len(ref) + 1))
    for a, h in enumerate(hyp, 1):
        cur = [a] + [0] * len(ref)
        for b, r in enumerate(ref, 1):
            cur[b] = min(prev[b] + 1, cur[b - 1] + 1, prev[b - 1] + (h != r))
        prev = cur
    return prev[-1]


def _exact_matches(hyp: Tokens, ref: Tokens) -> set[tuple[int, int]]:
    """(hyp, ref) index pairs matched exactly along one minimum-edit path."""
    H, R = len(hyp), len(ref)
    d = [[0] * (R + 1) for _ in range(H + 1)]
    for a in range(H + 1):
        d[a][0] = a
    for b in range(R + 1):
        d[0][b] = b
    for a in range(1, H + 1):
        for b in range(1, R + 1):
            d[a][b] = min(d[a - 1][b] + 1, d[a][b - 1] + 1, d[a - 1][b - 1] + (hyp[a - 1] != ref[b - 1]))
    out = set()
    a, b = H, R
    while a > 0 and b > 0:
        if hyp[a - 1] == ref[b - 1] and d[a][b] == d[a - 1][b - 1]:
            out.add((a - 1, b - 1))
            a, b = a - 1, b - 1
        elif d[a][b] == d[a - 1][b - 1] + 1:
            a, b = a - 1, b - 1
        elif d[a][b] == d[a - 1][b] + 1:
            a -= 1
        else:
            b -= 1
    return out


def apply_shift(words: Tokens, start: int, length: int, dest: int) -> list[str]:
    """Move ``words[start:start+length]`` so that it begins at index ``dest``
    of the resulting sequence."""
    block = list(words[start:start + length])
    rest = list(words[:start]) + list(words[start + length:])
    return rest[:dest] + block + rest[dest:]


def _best_shift(hyp: list[str], ref: Tokens, current: int):
    matched = _exact_matches(hyp, ref)
    ref_pos_of_hyp = {h: r for h, r in matched}
    best = None
    for start in range(len(hyp)):
        for length in range(1, min(MAX_SHIFT_SIZE, len(hyp) - start) + 1):
            block = hyp[start:start + length]
            for r in range(len(ref) - length + 1):
                if list(ref[r:r + length]) != block:
                    continue
                # the block must not already sit on its reference span
                if all(ref_pos_of_hyp.get(start + k) == r + k for k in range(length)):
                    continue
                rest_len = len(hyp) - length
                dests = {min(r, rest_len)}
                # also the slot right after the hyp word matched to ref[r-1]
                prev = [h for h, rr in matched if rr == r - 1]
                if prev:
                    p = prev[0]
                    dests.add(p + 1 if p < start else p + 1 - length)
                for dest in sorted(dests):
                    if dest == start or not 0 <= dest <= rest_len:
                        continue
                    cand = apply_shift(hyp, start, length, dest)
                    gain = current - edit_distance(cand, ref)
                    key = (gain, length, -start, -dest)
                    if gain > 0 and (best is None or key > best[0]):
                        best = (key, cand)
    return best


def ter_stats(hyp: Tokens, ref: Tokens) -> tuple[int, int, int]:
    """``(edits, ref_len, shifts)`` with greedy block shifts: repeatedly
    apply the single shift that most reduces the edit distance."""
    words = list(hyp)
    shifts = 0
    current = edit_distance(words, ref)
    while current > 0:
        found = _best_shift(words, ref, current)
        if found is None:
            break
        (gain, *_), words = found
        current -= gain
        shifts += 1
    return current + shifts, len(ref), shifts


def ter(hyp: Tokens, ref: Tokens) -> MetricScore:
    if not ref:
        raise ValueError("TER needs a non-empty reference")
    edits, ref_len, shifts = ter_stats(hyp, ref)
    return MetricScore("TER", edits / ref_len, {"edits": edits, "ref_len": ref_len, "shifts": shifts})


def ter_from_stats(stats: Sequence[float]) -> MetricScore:
    edits, ref_len, shifts = stats
    value = edits / ref_len if ref_len else 0.0
    return MetricScore("TER", value, {"edits": edits, "ref_len": ref_len, "shifts": shifts})


def corpus_ter(hyp: Sequence[Tokens], ref: Sequence[Tokens]) -> MetricScore:
    """Total edits over total reference words."""
    if len(hyp) != len(ref):
        raise ValueError(f"corpus size mismatch: {len(hyp)} hypotheses, {len(ref)} references")
    total = [0, 0, 0]
    for h, r in zip(hyp, ref):
        if not r:
            raise ValueError("TER needs non-empty references")
        for k, v in enumerate(ter_stats(h, r)):
            total[k] += v
    return ter_from_stats(total)


# -- bootstrap -----------------------------------------------------------------

@dataclass(frozen=True)
class Scorer:
    """Corpus-level metric expressed through additive per-sentence stats."""

    name: str
    sentence_stats: Callable[[Tokens, Tokens], Sequence[float]]
    from_stats: Callable[[Sequence[float]], MetricScore]

    def __call__(self, hyp, ref) -> MetricScore:
        if len(hyp) != len(ref):
            raise ValueError(f"corpus size mismatch: {len(hyp)} hypotheses, {len(ref)} references")
        stats = np.array([self.sentence_stats(h, r) for h, r in zip(hyp, ref)], dtype=np.float64)
        return self.from_stats(stats.sum(axis=0).tolist())


BLEU = Scorer("BLEU", bleu_stats, bleu_from_stats)
TER = Scorer("TER", ter_stats, ter_from_stats)
SCORERS = {"bleu": BLEU, "ter": TER}


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    resamples: int
    q: float
    survivors: int
    seed: int | None = None


def trimmed_count(q: float, resamples: int) -> int:
    """Elements dropped from each tail: floor(q% of resamples)."""
    return math.floor(Fraction(str(q)) * resamples / 100)


def bootstrap_scores(metric, hyp, ref, resamples: int = 1000, seed: int | None = 0) -> list[float]:
    if len(hyp) != len(ref):
        raise ValueError(f"corpus size mismatch: {len(hyp)} hypotheses, {len(ref)} references")
    if resamples < 1:
        raise ValueError("resamples must be >= 1")
    n = len(hyp)
    if n == 0:
        raise ValueError("cannot bootstrap an empty corpus")
    streams = np.random.SeedSequence(seed).spawn(resamples)
    if isinstance(metric, Scorer):
        stats = np.array([metric.sentence_stats(h, r) for h, r in zip(hyp, ref)], dtype=np.float64)
    scores = []
    for ss in streams:
        idx = np.random.default_rng(ss).integers(0, n, size=n)
        if isinstance(metric, Scorer):
            s = metric.from_stats(stats[idx].sum(axis=0).tolist())
        else:
            s = metric([hyp[k] for k in idx], [ref[k] for k in idx])
        scores.append(s.value if isinstance(s, MetricScore) else float(s))
    return scores


def bootstrap_ci(metric, hyp, ref, resamples: int = 1000, q: float = 2.5, seed: int | None = 0) -> ConfidenceInterval:
    """Resample sentence pairs with replacement, score each resample, drop
    the q% lowest and highest scores and report the range of the rest.

    ``metric`` is a :class:`Scorer` (fast path) or any callable scoring a
    whole corpus.
    """
    if not 0 <= q < 50:
        raise ValueError("q must be in [0, 50)")
    scores = sorted(bootstrap_scores(metric, hyp, ref, resamples, seed))
    drop = trimmed_count(q, resamples)
    kept = scores[drop:len(scores) - drop]
    return ConfidenceInterval(kept[0], kept[-1], 1 - 2 * q / 100, resamples, q, len(kept), seed)
