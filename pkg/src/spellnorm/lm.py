"""Character n-gram language model with interpolated modified Kneser-Ney.

Probabilities are stored the ARPA way: every seen n-gram carries its
interpolated log10 probability and every context carries log10 of the mass
it hands to the next lower order.  Querying an unseen n-gram walks the
backoff chain, which for an interpolated model reproduces the interpolated
estimate exactly.
"""

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .corpus import parse_symbol, render_symbol
from .errors import ModelLoadError, ParameterError, TrainingError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

# log10 probability written for n-grams that are only ever contexts (<s> runs)
NO_PROB = -99.0
FALLBACK_DISCOUNT = 0.5

NGram = Tuple[str, ...]


@dataclass
class NGramLM:
    order: int
    vocab: frozenset
    prob: Dict[NGram, float]
    backoff: Dict[NGram, float]
    discounts: Optional[List[Tuple[float, float, float]]] = field(default=None, compare=False)

    def predictable(self) -> List[str]:
        """Symbols a conditional distribution ranges over (everything but <s>)."""
        return sorted(s for s in self.vocab if s != BOS)

    def start_state(self) -> NGram:
        return (BOS,) * (self.order - 1)

    def score(self, context: Sequence[str], symbol: str) -> float:
        """log10 P(symbol | context)."""
        if symbol not in self.vocab:
            symbol = UNK
        n = self.order - 1
        h = tuple(context[-n:]) if n else ()
        acc = 0.0
        while True:
            p = self.prob.get(h + (symbol,))
            if p is not None:
                return acc + p
            acc += self.backoff.get(h, 0.0)
            h = h[1:]

    def advance(self, state: NGram, symbol: str) -> NGram:
        if self.order == 1:
            return ()
        return (state + (symbol,))[-(self.order - 1):]


def _discounts(counts: Counter) -> Tuple[float, float, float]:
    coc = Counter(c for c in counts.values() if c <= 4)
    n1, n2, n3, n4 = (coc[k] for k in (1, 2, 3, 4))
    if min(n1, n2, n3, n4) == 0:
        return (FALLBACK_DISCOUNT,) * 3
    y = n1 / (n1 + 2 * n2)
    d = (1 - 2 * y * n2 / n1, 2 - 3 * y * n3 / n2, 3 - 4 * y * n4 / n3)
    if not all(0 < dk < k for k, dk in enumerate(d, 1)):
        return (FALLBACK_DISCOUNT,) * 3
    return d


def _adjusted_counts(sequences: Iterable[Sequence[str]], order: int) -> List[Counter]:
    """Raw counts at the top order, left-continuation counts below it."""
    counts = [Counter() for _ in range(order + 1)]
    pad = (BOS,) * (order - 1)
    for seq in sequences:
        toks = pad + tuple(seq) + (EOS,)
        for i in range(order - 1, len(toks)):
            counts[order][toks[i - order + 1:i + 1]] += 1
    for n in range(order - 1, 0, -1):
        lower = Counter()
        for gram in counts[n + 1]:
            lower[gram[1:]] += 1
        counts[n] = lower
    return counts


def train_lm(sequences: Sequence[Sequence[str]], order: int = 5) -> NGramLM:
    if order < 1:
        raise ParameterError(f"LM order must be >= 1, got {order}")
    sequences = list(sequences)
    if not sequences:
        raise TrainingError("cannot train a language model on zero sentences")

    counts = _adjusted_counts(sequences, order)
    vocab = {g[0] for g in counts[1]} | {EOS, UNK}
    n_predictable = len(vocab)
    vocab.add(BOS)
    model = NGramLM(order=order, vocab=frozenset(vocab), prob={}, backoff={}, discounts=[])

    for n in range(1, order + 1):
        grams = counts[n]
        d = _discounts(grams)
        model.discounts.append(d)
        total = defaultdict(int)
        nk = defaultdict(lambda: [0, 0, 0])
        for gram in sorted(grams):
            c = grams[gram]
            h = gram[:-1]
            total[h] += c
            nk[h][min(c, 3) - 1] += 1
        gamma = {h: (d[0] * k[0] + d[1] * k[1] + d[2] * k[2]) / total[h] for h, k in nk.items()}

        for gram in sorted(grams):
            c = grams[gram]
            h = gram[:-1]
            if n == 1:
                lower = 1.0 / n_predictable
            else:
                lower = 10.0 ** model.score(h[1:], gram[-1])
            p = (c - d[min(c, 3) - 1]) / total[h] + gamma[h] * lower
            model.prob[gram] = math.log10(p)
        if n == 1:
            model.prob[(UNK,)] = math.log10(gamma[()] / n_predictable)
            model.prob.setdefault((BOS,), NO_PROB)
        for h, g in gamma.items():
            if h:
                model.prob.setdefault(h, NO_PROB)
            model.backoff[h] = math.log10(g)
    # backoff of the empty context is folded into the unigram estimates
    model.backoff.pop((), None)
    return model


def lm_logprob(lm: NGramLM, seq: Sequence[str]) -> float:
    """log10 probability of a whole sentence, end-of-sentence included."""
    state = lm.start_state()
    total = 0.0
    for sym in tuple(seq) + (EOS,):
        total += lm.score(state, sym)
        state = lm.advance(state, sym)
    return total


def lm_continuations(lm: NGramLM, context: Sequence[str]) -> Dict[str, float]:
    ctx = tuple(context)
    if lm.order > 1:
        ctx = ((BOS,) * (lm.order - 1) + ctx)[-(lm.order - 1):]
    return {sym: lm.score(ctx, sym) for sym in lm.predictable()}


def perplexity(lm: NGramLM, sequences: Sequence[Sequence[str]]) -> float:
    total = 0.0
    n = 0
    for seq in sequences:
        total += lm_logprob(lm, seq)
        n += len(seq) + 1
    return 10.0 ** (-total / n)


def _render(gram: NGram) -> str:
    return " ".join(render_symbol(s) for s in gram)


def write_arpa(lm: NGramLM, path) -> None:
    by_order = defaultdict(list)
    for gram in lm.prob:
        by_order[len(gram)].append(gram)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n\\data\\\n")
        for n in range(1, lm.order + 1):
            f.write(f"ngram {n}={len(by_order[n])}\n")
        for n in range(1, lm.order + 1):
            f.write(f"\n\\{n}-grams:\n")
            for gram in sorted(by_order[n]):
                line = f"{lm.prob[gram]!r}\t{_render(gram)}"
                if gram in lm.backoff:
                    line += f"\t{lm.backoff[gram]!r}"
                f.write(line + "\n")
        f.write("\n\\end\\\n")


def read_arpa(path) -> NGramLM:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ModelLoadError(f"cannot read language model {path}: {exc}") from None
    prob: Dict[NGram, float] = {}
    backoff: Dict[NGram, float] = {}
    declared: Dict[int, int] = {}
    section = None
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        if not line:
            continue
        if line == "\\data\\":
            section = 0
            continue
        if line == "\\end\\":
            break
        if line.startswith("\\") and line.endswith("-grams:"):
            section = int(line[1:-7])
            continue
        try:
            if section == 0:
                key, value = line[len("ngram "):].split("=")
                declared[int(key)] = int(value)
                continue
            fields = line.split("\t")
            gram = tuple(parse_symbol(t) for t in fields[1].split(" "))
            if len(gram) != section:
                raise ValueError(f"expected a {section}-gram")
            prob[gram] = float(fields[0])
            if len(fields) > 2:
                backoff[gram] = float(fields[2])
        except (ValueError, IndexError, TypeError) as exc:
            raise ModelLoadError(f"{path}:{lineno}: malformed ARPA line ({exc})") from None
    if not declared:
        raise ModelLoadError(f"{path}: missing \\data\\ header")
    for n, k in declared.items():
        found = sum(1 for g in prob if len(g) == n)
        if found != k:
            raise ModelLoadError(f"{path}: header declares {k} {n}-grams, found {found}")
    vocab = frozenset(g[0] for g in prob if len(g) == 1)
    if UNK not in vocab:
        raise ModelLoadError(f"{path}: no {UNK} unigram")
    return NGramLM(order=max(declared), vocab=vocab, prob=prob, backoff=backoff)
