"""Slow, obviously-correct reference implementations used by the tests."""

import itertools
from functools import lru_cache

from spellnorm.align import PhrasePair, PhraseTable
from spellnorm.decoder import OOV_LOGPROB
from spellnorm.lm import lm_logprob


def edit_distance(a, b):
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0 or j == 0:
            return i + j
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))
    return d(len(a), len(b))


def ter_one_shift(hyp, ref):
    """Minimal edits over scripts with at most one block shift of a span
    that occurs somewhere in the reference."""
    best = edit_distance(hyp, ref)
    spans = {tuple(ref[i:j]) for i in range(len(ref)) for j in range(i + 1, len(ref) + 1)}
    for i in range(len(hyp)):
        for j in range(i + 1, len(hyp) + 1):
            if tuple(hyp[i:j]) not in spans:
                continue
            rest = hyp[:i] + hyp[j:]
            for k in range(len(rest) + 1):
                best = min(best, 1 + edit_distance(rest[:k] + hyp[i:j] + rest[k:], ref))
    return best


def exhaustive_decode(src, table, lm, w, max_len):
    """Best log-linear score over every segmentation and every option choice."""
    src = tuple(src)
    w0, w1, w2, w3 = w.as_tuple()
    best = None

    def options(i):
        out = []
        for length in range(1, min(max_len, len(src) - i) + 1):
            for p in table.get(src[i:i + length]):
                out.append((length, p.tgt, p.fwd, p.rev))
        if (src[i],) not in table:
            out.append((1, (src[i],), OOV_LOGPROB, OOV_LOGPROB))
        return out

    def walk(i, out, fa, fb):
        nonlocal best
        if i == len(src):
            fc = lm_logprob(lm, out)
            score = w0 * fa + w1 * fb + w2 * fc + w3 * len(out)
            if best is None or score > best:
                best = score
            return
        for length, tgt, fwd, rev in options(i):
            walk(i + length, out + tgt, fa + fwd, fb + rev)

    walk(0, (), 0.0, 0.0)
    return best


def random_table(rng, alphabet, max_src=2, per_src=3, max_tgt=2):
    entries = {}
    for n in range(1, max_src + 1):
        for seg in itertools.product(alphabet, repeat=n):
            if n > 1 and rng.random() < 0.5:
                continue
            k = rng.randint(1, per_src)
            tgts = set()
            while len(tgts) < k:
                tgts.add(tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_tgt))))
            pairs = [PhrasePair(seg, t, -rng.random() * 2, -rng.random() * 2, 1) for t in sorted(tgts)]
            entries[seg] = sorted(pairs, key=lambda p: (-p.fwd, p.tgt))
    return PhraseTable(entries, max_src)


def exact_ar_p(stats_a, stats_b, score, observed, eps=1e-9):
    """Share of all 2^n swap patterns whose delta reaches the observed one."""
    n = len(stats_a)
    hits = 0
    for mask in itertools.product((0, 1), repeat=n):
        a = [sb if m else sa for m, sa, sb in zip(mask, stats_a, stats_b)]
        b = [sa if m else sb for m, sa, sb in zip(mask, stats_a, stats_b)]
        if abs(score(a) - score(b)) >= observed - eps:
            hits += 1
    return hits / 2 ** n


def random_words(rng, alphabet="abcd", max_words=5):
    return [rng.choice(alphabet) for _ in range(rng.randint(0, max_words))]

