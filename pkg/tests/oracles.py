"""Independent reference implementations used only by the tests.

Each one is written the slow, obvious way and shares no code with the
package path it checks.
"""

from fractions import Fraction
from itertools import product
import math


def brute_force_phrases(m, n, links, max_source_len=7, boundary=True):
    """Every (source span, target span) rectangle tested clause by clause
    against the consistency + boundary-alignment definition.  Spans are
    inclusive ``(start, end)``."""
    out = set()
    for j in range(m):
        for jj in range(j, m):
            if jj - j + 1 > max_source_len:
                continue
            for i in range(n):
                for ii in range(i, n):
                    consistent = all((j <= b <= jj) == (i <= a <= ii) for a, b in links)
                    if not consistent:
                        continue
                    if boundary:
                        c1 = any((k, j) in links for k in range(i, ii + 1))
                        c2 = any((k, jj) in links for k in range(i, ii + 1))
                        c3 = any((i, l) in links for l in range(j, jj + 1))
                        c4 = any((ii, l) in links for l in range(j, jj + 1))
                        if not (c1 and c2 and c3 and c4):
                            continue
                    out.add(((j, jj), (i, ii)))
    return out


def scripted_em(corpus, iterations):
    """IBM Model 1 on string tokens with exact rational arithmetic.

    ``corpus`` is a list of (source words, target words).  Returns a list of
    tables ``{(f, e): t}``, one per iteration including the initial one.
    """
    null = "NULL"
    vocab = {}
    for src, tgt in corpus:
        for e in [null] + list(src):
            vocab.setdefault(e, set()).update(tgt)
    t = {(f, e): Fraction(1, len(fs)) for e, fs in vocab.items() for f in fs}
    history = [dict(t)]
    for _ in range(iterations):
        count = {}
        total = {}
        for src, tgt in corpus:
            full = [null] + list(src)
            for f in tgt:
                z = sum(t[(f, e)] for e in full)
                for e in full:
                    c = t[(f, e)] / z
                    count[(f, e)] = count.get((f, e), 0) + c
                    total[e] = total.get(e, 0) + c
        t = {(f, e): c / total[e] for (f, e), c in count.items()}
        history.append(dict(t))
    return history


def dp_edit_distance(a, b):
    """Levenshtein distance by full table (recursive definition, memoised)."""
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def d(x, y):
        if x == 0:
            return y
        if y == 0:
            return x
        return min(d(x - 1, y) + 1, d(x, y - 1) + 1, d(x - 1, y - 1) + (a[x - 1] != b[y - 1]))

    return d(len(a), len(b))


def all_single_shifts(words):
    """Every sequence obtainable by moving one contiguous block elsewhere."""
    n = len(words)
    out = set()
    for s in range(n):
        for length in range(1, n - s + 1):
            block = words[s:s + length]
            rest = words[:s] + words[s + length:]
            for p in range(len(rest) + 1):
                cand = rest[:p] + block + rest[p:]
                if cand != words:
                    out.add(cand)
    return out


def optimal_ter_edits(hyp, ref, max_shifts=2):
    """Minimum of shifts + edit distance over all shift sequences of length
    up to ``max_shifts`` (exhaustive; tiny inputs only)."""
    best = dp_edit_distance(tuple(hyp), tuple(ref))
    frontier = {tuple(hyp)}
    for k in range(1, max_shifts + 1):
        nxt = set()
        for w in frontier:
            nxt |= all_single_shifts(w)
        for w in nxt:
            best = min(best, k + dp_edit_distance(w, tuple(ref)))
        frontier = nxt
    return best


def reference_bleu(hyp, ref, max_n=4):
    """Sentence-level BLEU written straight from the formula."""
    logs = []
    for n in range(1, max_n + 1):
        hg = [tuple(hyp[k:k + n]) for k in range(len(hyp) - n + 1)]
        rg = [tuple(ref[k:k + n]) for k in range(len(ref) - n + 1)]
        clipped = sum(min(hg.count(g), rg.count(g)) for g in set(hg))
        if clipped == 0:
            return 0.0
        logs.append(math.log(clipped / len(hg)))
    c, r = len(hyp), len(ref)
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return bp * math.exp(sum(logs) / max_n)


def reference_scan(patterns, classes):
    """Left-to-right longest match by trying every length at each position."""
    longest = max((len(p) for p in patterns), default=0)
    pos, out = 0, []
    while pos < len(classes):
        for length in range(min(longest, len(classes) - pos), 0, -1):
            if tuple(classes[pos:pos + length]) in patterns:
                out.append((pos, length))
                pos += length
                break
        else:
            out.append((pos, None))
            pos += 1
    return out


def random_alignment(rng, m, n, density=0.3):
    return {(i, j) for i, j in product(range(n), range(m)) if rng.random() < density}
