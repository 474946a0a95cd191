"""Monotone log-linear beam-search decoder over character sequences."""

import heapq
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .align import PhraseTable
from .corpus import char_tokenize, detokenize, read_lines, repair_charseq, write_lines
from .errors import DecodeError, ModelLoadError, ParameterError
from .lm import EOS, NGramLM

log = logging.getLogger(__name__)

FEATURES = ("tm_fwd", "tm_rev", "lm", "penalty")
# TM feature value for characters copied through without a table entry
OOV_LOGPROB = -2.0


@dataclass(frozen=True)
class FeatureWeights:
    tm_fwd: float = 1.0
    tm_rev: float = 1.0
    lm: float = 1.0
    penalty: float = 1.0

    def __post_init__(self):
        values = astuple(self)
        if not all(math.isfinite(v) for v in values):
            raise ParameterError(f"feature weights must be finite: {values}")
        if not any(values):
            raise ParameterError("at least one feature weight must be nonzero")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return astuple(self)

    @classmethod
    def from_tuple(cls, values: Sequence[float]) -> "FeatureWeights":
        return cls(*(float(v) for v in values))

    def scaled(self, c: float) -> "FeatureWeights":
        return FeatureWeights.from_tuple([c * v for v in astuple(self)])

    def l1_normalized(self) -> "FeatureWeights":
        return self.scaled(1.0 / sum(abs(v) for v in astuple(self)))

    def to_text(self) -> str:
        return "".join(f"{f.name}={getattr(self, f.name)!r}\n" for f in fields(self))

    @classmethod
    def from_text(cls, text: str) -> "FeatureWeights":
        values = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in FEATURES:
                raise ValueError(f"unknown feature weight {key!r}")
            values[key] = float(value)
        return cls(**values)


def read_weights(path) -> FeatureWeights:
    try:
        return FeatureWeights.from_text(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ModelLoadError(f"cannot read weights {path}: {exc}") from None


def write_weights(w: FeatureWeights, path) -> None:
    Path(path).write_text(w.to_text(), encoding="utf-8")


@dataclass(frozen=True)
class DecoderConfig:
    beam_size: int = 12
    max_len: int = 6
    oov_policy: bool = True
    table_limit: int = 20

    def __post_init__(self):
        if self.beam_size < 1:
            raise ParameterError(f"beam_size must be >= 1, got {self.beam_size}")
        if self.max_len < 1:
            raise ParameterError(f"max_len must be >= 1, got {self.max_len}")


@dataclass
class Hypothesis:
    consumed: int
    output: Tuple[str, ...]
    feature_totals: Tuple[float, float, float, float]
    score: float
    repairs: int = 0


def score_hypothesis(feature_totals: Sequence[float], w: FeatureWeights) -> float:
    weights = w.as_tuple()
    if len(feature_totals) != len(weights):
        raise ParameterError(f"expected {len(weights)} feature values, got {len(feature_totals)}")
    f0, f1, f2, f3 = feature_totals
    return weights[0] * f0 + weights[1] * f1 + weights[2] * f2 + weights[3] * f3


class Decoder:
    """Binds a phrase table and LM; caches LM transitions across sentences
    and weight vectors, since neither depends on the weights."""

    def __init__(self, table: PhraseTable, lm: NGramLM, cfg: Optional[DecoderConfig] = None):
        self.table = table
        self.lm = lm
        self.cfg = cfg or DecoderConfig()
        self._lm_cache: Dict[Tuple, Tuple[Tuple[float, ...], Tuple[str, ...]]] = {}
        self._option_cache: Dict[Tuple[str, ...], List] = {}

    def _lm_step(self, state, tgt):
        key = (state, tgt)
        hit = self._lm_cache.get(key)
        if hit is None:
            lm = self.lm
            lps = []
            for sym in tgt:
                lps.append(lm.score(state, sym))
                state = lm.advance(state, sym)
            hit = self._lm_cache[key] = (tuple(lps), state)
        return hit

    def options(self, src: Sequence[str]) -> List[List[Tuple[int, Tuple[str, ...], float, float]]]:
        """Translation options starting at each source position."""
        src = tuple(src)
        cached = self._option_cache.get(src)
        if cached is not None:
            return cached
        cfg = self.cfg
        opts = []
        for i in range(len(src)):
            here = []
            for length in range(1, min(cfg.max_len, len(src) - i) + 1):
                for p in self.table.get(src[i:i + length])[:cfg.table_limit]:
                    here.append((length, p.tgt, p.fwd, p.rev))
            if cfg.oov_policy and (src[i],) not in self.table:
                here.append((1, (src[i],), OOV_LOGPROB, OOV_LOGPROB))
            opts.append(here)
        self._option_cache[src] = opts
        return opts

    def decode(self, src: Sequence[str], w: FeatureWeights) -> Hypothesis:
        src = tuple(src)
        n = len(src)
        w0, w1, w2, w3 = w.as_tuple()
        opts = self.options(src)
        beam = self.cfg.beam_size
        # hypothesis: (score, output, f_fwd, f_rev, f_lm, f_len, lm_state)
        stacks: List[Dict] = [dict() for _ in range(n + 1)]
        start = self.lm.start_state()
        stacks[0][start] = (0.0, (), 0.0, 0.0, 0.0, 0, start)

        for i in range(n):
            stack = stacks[i]
            if not stack:
                continue
            if len(stack) > beam:
                survivors = heapq.nsmallest(beam, stack.values(), key=_rank)
            else:
                survivors = stack.values()
            for _, out, a, b, c, d, state in survivors:
                for length, tgt, fwd, rev in opts[i]:
                    lps, new_state = self._lm_step(state, tgt)
                    fc = c
                    for lp in lps:
                        fc += lp
                    fa, fb, fd = a + fwd, b + rev, d + len(tgt)
                    score = w0 * fa + w1 * fb + w2 * fc + w3 * fd
                    target = stacks[i + length]
                    old = target.get(new_state)
                    if old is None or score > old[0] or (score == old[0] and out + tgt < old[1]):
                        target[new_state] = (score, out + tgt, fa, fb, fc, fd, new_state)
            stacks[i] = None  # free memory early on long inputs

        final = stacks[n]
        if not final:
            raise DecodeError(
                f"no hypothesis covers the full input ({n} symbols); enable oov_policy or extend the table"
            )
        best = None
        for _, out, a, b, c, d, state in final.values():
            fc = c + self.lm.score(state, EOS)
            score = w0 * a + w1 * b + w2 * fc + w3 * d
            cand = (score, out, (a, b, fc, d))
            if best is None or score > best[0] or (score == best[0] and out < best[1]):
                best = cand
        score, out, feats = best
        repaired, repairs = repair_charseq(out)
        return Hypothesis(consumed=n, output=repaired, feature_totals=feats, score=score, repairs=repairs)

    def normalize(self, sentence: str, w: FeatureWeights) -> Tuple[str, int]:
        hyp = self.decode(char_tokenize(sentence), w)
        return detokenize(hyp.output), hyp.repairs


def _rank(h):
    return (-h[0], h[1])


def decode(src, table: PhraseTable, lm: NGramLM, w: FeatureWeights,
           cfg: Optional[DecoderConfig] = None) -> Hypothesis:
    return Decoder(table, lm, cfg).decode(src, w)


_worker: Optional[Tuple[Decoder, FeatureWeights]] = None


def _init_worker(decoder, w):
    global _worker
    _worker = (decoder, w)


def _normalize_one(sentence):
    decoder, w = _worker
    return decoder.normalize(sentence, w)


def normalize_sentences(sentences: Sequence[str], decoder: Decoder, w: FeatureWeights,
                        threads: int = 1) -> Tuple[List[str], int]:
    """Decode a batch; output order follows input order.  Returns the
    outputs and the number of boundary repairs applied."""
    if threads > 1 and len(sentences) > 1:
        with ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(decoder, w)) as pool:
            results = list(pool.map(_normalize_one, sentences, chunksize=16))
    else:
        results = [decoder.normalize(s, w) for s in sentences]
    outputs = [r[0] for r in results]
    repairs = sum(r[1] for r in results)
    if repairs:
        log.warning("collapsed %d misplaced word-boundary markers in decoder output", repairs)
    return outputs, repairs


def normalize_corpus(src_file, table: PhraseTable, lm: NGramLM, w: FeatureWeights,
                     cfg: Optional[DecoderConfig] = None, out_file=None, threads: int = 1) -> List[str]:
    sentences = read_lines(src_file)
    outputs, _ = normalize_sentences(sentences, Decoder(table, lm, cfg), w, threads)
    if out_file is not None:
        write_lines(out_file, outputs)
    return outputs
