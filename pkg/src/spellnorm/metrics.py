"""CER, TER and BLEU over detokenized sentences.

Each metric is a ratio of integer sums over sentences, so every per-sentence
function returns those integers; corpus scores (and the randomization test)
are built by pooling them.
"""

import json
import math
import re
from collections import Counter
from dataclasses import asdict, dataclass
from typing import List, Sequence, Tuple

import numpy as np

from . import _edit
from .corpus import ParallelCorpus
from .errors import ParameterError

MAX_SHIFTS = 10
MAX_SHIFT_SPAN = 10
BLEU_ORDER = 4


def _check(hyps, refs):
    if len(hyps) != len(refs):
        raise ParameterError(f"hypothesis/reference count mismatch: {len(hyps)} vs {len(refs)}")


def _percent(num, den):
    if den == 0:
        return 0.0 if num == 0 else math.inf
    return 100.0 * num / den


# --- CER -------------------------------------------------------------------

def cer_stats(hyp: str, ref: str) -> Tuple[int, int, int, int, int, int]:
    """(edits, ref_chars, hyp_chars, insertions, deletions, substitutions)."""
    ops = _edit.backtrace(hyp, ref)
    ins, dels, subs = _edit.op_counts(ops)
    # backtrace runs hyp -> ref: an insertion adds a reference character
    return ins + dels + subs, len(ref), len(hyp), ins, dels, subs


def cer(hyps: Sequence[str], refs: Sequence[str], denominator: str = "ref") -> float:
    _check(hyps, refs)
    if denominator not in ("ref", "hyp"):
        raise ParameterError(f"CER denominator must be 'ref' or 'hyp', got {denominator!r}")
    edits = sum(_edit.distance(h, r) for h, r in zip(hyps, refs))
    if denominator == "ref":
        return _percent(edits, sum(len(r) for r in refs))
    return _percent(edits, sum(len(h) for h in hyps))


# --- TER -------------------------------------------------------------------

def _ref_spans(ref) -> set:
    spans = set()
    for i in range(len(ref)):
        for j in range(i + 1, min(len(ref), i + MAX_SHIFT_SPAN) + 1):
            spans.add(tuple(ref[i:j]))
    return spans


def _batch_distance(cands: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Levenshtein distance of every row of `cands` (equal lengths) to `ref`."""
    n_cands, length = cands.shape
    m = len(ref)
    cols = np.arange(m + 1)
    prev = np.broadcast_to(cols, (n_cands, m + 1))
    row = np.empty((n_cands, m + 1), dtype=np.int64)
    for t in range(length):
        cost = cands[:, t:t + 1] != ref[None, :]
        row[:, 0] = t + 1
        np.minimum(prev[:, :-1] + cost, prev[:, 1:] + 1, out=row[:, 1:])
        # insertions: row[j] = min over j' <= j of row[j'] + (j - j')
        row = np.minimum.accumulate(row - cols, axis=1) + cols
        prev = row
        row = np.empty_like(prev)
    return prev[:, m]


def _best_shift(hyp, ref, cost, ref_spans):
    """Shift that lowers the edit distance most, or None.

    A candidate moves a contiguous hypothesis span that also occurs in the
    reference to any other position.  Ties keep the first candidate in
    (start, end, destination) order.
    """
    n = len(hyp)
    moves = []
    for i in range(n):
        for j in range(i + 1, min(n, i + MAX_SHIFT_SPAN) + 1):
            if tuple(hyp[i:j]) not in ref_spans:
                break
            rest = list(range(i)) + list(range(j, n))
            span = list(range(i, j))
            for k in range(len(rest) + 1):
                if k != i:
                    moves.append(rest[:k] + span + rest[k:])
    if not moves:
        return None
    ids = {}
    h = np.array([ids.setdefault(w, len(ids)) for w in hyp], dtype=np.int64)
    r = np.array([ids.setdefault(w, len(ids)) for w in ref], dtype=np.int64)
    dist = _batch_distance(h[np.array(moves)], r)
    best = int(np.argmin(dist))
    if dist[best] >= cost:
        return None
    return int(dist[best]), [hyp[k] for k in moves[best]]


def ter_stats(hyp: str, ref: str, shifts: bool = True,
              max_shifts: int = MAX_SHIFTS) -> Tuple[int, int, int, int, int, int]:
    """(edits, ref_words, insertions, deletions, substitutions, shifts)."""
    h, r = hyp.split(), ref.split()
    cost = _edit.distance(h, r)
    n_shifts = 0
    if shifts and cost > 0:
        spans = _ref_spans(r)
        while n_shifts < max_shifts and cost > 0:
            found = _best_shift(h, r, cost, spans)
            if found is None:
                break
            cost, h = found
            n_shifts += 1
    ins, dels, subs = _edit.op_counts(_edit.backtrace(h, r))
    return cost + n_shifts, len(r), ins, dels, subs, n_shifts


def ter(hyps: Sequence[str], refs: Sequence[str], shifts: bool = True) -> float:
    _check(hyps, refs)
    edits = words = 0
    for h, r in zip(hyps, refs):
        e, n, *_ = ter_stats(h, r, shifts)
        edits += e
        words += n
    return _percent(edits, words)


def wer(hyps: Sequence[str], refs: Sequence[str]) -> float:
    return ter(hyps, refs, shifts=False)


# --- BLEU ------------------------------------------------------------------

_13A = [
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
]


def tokenize_13a(line: str) -> str:
    line = line.replace("<skipped>", "").replace("-\n", "").replace("\n", " ")
    if "&" in line:
        line = (line.replace("&quot;", '"').replace("&amp;", "&")
                .replace("&lt;", "<").replace("&gt;", ">"))
    line = f" {line} "
    for pattern, repl in _13A:
        line = pattern.sub(repl, line)
    return " ".join(line.split())


def _ngrams(words, n):
    return Counter(tuple(words[i:i + n]) for i in range(len(words) - n + 1))


def bleu_stats(hyp: str, ref: str) -> List[int]:
    """[matches_1..4, totals_1..4, hyp_len, ref_len] after 13a tokenization."""
    h = tokenize_13a(hyp).split()
    r = tokenize_13a(ref).split()
    matches, totals = [], []
    for n in range(1, BLEU_ORDER + 1):
        hc, rc = _ngrams(h, n), _ngrams(r, n)
        matches.append(sum(min(c, rc[g]) for g, c in hc.items()))
        totals.append(max(len(h) - n + 1, 0))
    return matches + totals + [len(h), len(r)]


def bleu_from_stats(stats: Sequence[float]) -> float:
    matches = stats[:BLEU_ORDER]
    totals = stats[BLEU_ORDER:2 * BLEU_ORDER]
    hyp_len, ref_len = stats[-2], stats[-1]
    if hyp_len == 0 or min(matches) == 0:
        return 0.0
    log_prec = sum(math.log(m / t) for m, t in zip(matches, totals)) / BLEU_ORDER
    brevity = min(0.0, 1.0 - ref_len / hyp_len)
    return 100.0 * math.exp(log_prec + brevity)


def bleu(hyps: Sequence[str], refs: Sequence[str]) -> float:
    _check(hyps, refs)
    total = [0] * (2 * BLEU_ORDER + 2)
    for h, r in zip(hyps, refs):
        for k, v in enumerate(bleu_stats(h, r)):
            total[k] += v
    return bleu_from_stats(total)


# --- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class EvalReport:
    cer: float
    ter: float
    bleu: float
    sentence_count: int
    char_insertions: int
    char_deletions: int
    char_substitutions: int
    word_insertions: int
    word_deletions: int
    word_substitutions: int
    word_shifts: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_tsv(self) -> str:
        d = self.to_dict()
        return "\t".join(d) + "\n" + "\t".join(_fmt(v) for v in d.values()) + "\n"


def _fmt(v):
    return f"{v:.2f}" if isinstance(v, float) else str(v)


def evaluate(hyps: Sequence[str], refs: Sequence[str], cer_denominator: str = "ref") -> EvalReport:
    _check(hyps, refs)
    c = [0] * 6
    t = [0] * 6
    b = [0] * (2 * BLEU_ORDER + 2)
    for h, r in zip(hyps, refs):
        for acc, stats in ((c, cer_stats(h, r)), (t, ter_stats(h, r)), (b, bleu_stats(h, r))):
            for k, v in enumerate(stats):
                acc[k] += v
    cer_den = c[1] if cer_denominator == "ref" else c[2]
    return EvalReport(
        cer=_percent(c[0], cer_den),
        ter=_percent(t[0], t[1]),
        bleu=bleu_from_stats(b),
        sentence_count=len(hyps),
        char_insertions=c[3],
        char_deletions=c[4],
        char_substitutions=c[5],
        word_insertions=t[2],
        word_deletions=t[3],
        word_substitutions=t[4],
        word_shifts=t[5],
    )


def identity_baseline(corpus: ParallelCorpus, cer_denominator: str = "ref") -> EvalReport:
    """Score the untouched source text against the normalized references."""
    return evaluate(corpus.sources, corpus.targets, cer_denominator)
