"""Paired approximate randomization test for corpus-level metrics."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import metrics
from .errors import ParameterError

METRICS = ("cer", "ter", "bleu")
# observed and shuffled deltas closer than this count as ties
TIE_EPS = 1e-9


@dataclass(frozen=True)
class ARConfig:
    repetitions: int = 10000
    alpha: float = 0.05
    seed: int = 0
    metric: str = "bleu"

    def __post_init__(self):
        if self.repetitions < 1:
            raise ParameterError(f"repetitions must be >= 1, got {self.repetitions}")
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.metric not in METRICS:
            raise ParameterError(f"unknown metric {self.metric!r}; expected one of {METRICS}")


@dataclass(frozen=True)
class ARResult:
    p_value: float
    significant: bool
    observed_delta: float
    metric: str
    repetitions: int


def sentence_stats(hyps: Sequence[str], refs: Sequence[str], metric: str) -> np.ndarray:
    """Per-sentence sufficient statistics; a corpus score is a function of
    their column sums."""
    if metric == "cer":
        rows = [metrics.cer_stats(h, r)[:2] for h, r in zip(hyps, refs)]
    elif metric == "ter":
        rows = [metrics.ter_stats(h, r)[:2] for h, r in zip(hyps, refs)]
    else:
        rows = [metrics.bleu_stats(h, r) for h, r in zip(hyps, refs)]
    width = 2 if metric != "bleu" else 2 * metrics.BLEU_ORDER + 2
    return np.array(rows, dtype=np.int64).reshape(len(rows), width)


def corpus_score(totals: np.ndarray, metric: str) -> float:
    if metric == "bleu":
        return metrics.bleu_from_stats([int(v) for v in totals])
    edits, length = int(totals[0]), int(totals[1])
    return metrics._percent(edits, length)


def _scores(totals: np.ndarray, metric: str) -> np.ndarray:
    """Vectorized corpus_score over rows of summed statistics."""
    totals = totals.astype(np.float64)
    if metric != "bleu":
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 100.0 * totals[:, 0] / totals[:, 1]
        out[(totals[:, 1] == 0) & (totals[:, 0] == 0)] = 0.0
        return out
    k = metrics.BLEU_ORDER
    matches, counts = totals[:, :k], totals[:, k:2 * k]
    hyp_len, ref_len = totals[:, -2], totals[:, -1]
    ok = (hyp_len > 0) & (matches.min(axis=1) > 0)
    out = np.zeros(len(totals))
    with np.errstate(divide="ignore", invalid="ignore"):
        log_prec = np.log(matches[ok] / counts[ok]).sum(axis=1) / k
        brevity = np.minimum(0.0, 1.0 - ref_len[ok] / hyp_len[ok])
    out[ok] = 100.0 * np.exp(log_prec + brevity)
    return out


def flip_masks(n: int, repetitions: int, seed: int, start: int = 0) -> np.ndarray:
    """One row of fair coin flips per repetition.  Row r depends only on
    (seed, r), never on how repetitions are batched."""
    masks = np.empty((repetitions, n), dtype=bool)
    for r in range(repetitions):
        masks[r] = np.random.default_rng([seed, start + r]).random(n) < 0.5
    return masks


def ar_from_stats(stats_a: np.ndarray, stats_b: np.ndarray, cfg: ARConfig) -> ARResult:
    if stats_a.shape != stats_b.shape:
        raise ParameterError("both systems need statistics for the same sentences")
    metric = cfg.metric
    observed = abs(corpus_score(stats_a.sum(axis=0), metric) - corpus_score(stats_b.sum(axis=0), metric))
    diff = stats_b - stats_a
    base_a = stats_a.sum(axis=0)
    base_b = stats_b.sum(axis=0)
    hits = 0
    batch = 1000
    for start in range(0, cfg.repetitions, batch):
        reps = min(batch, cfg.repetitions - start)
        masks = flip_masks(len(stats_a), reps, cfg.seed, start).astype(np.int64)
        moved = masks @ diff
        deltas = np.abs(_scores(base_a + moved, metric) - _scores(base_b - moved, metric))
        hits += int(np.count_nonzero(deltas >= observed - TIE_EPS))
    p = (hits + 1) / (cfg.repetitions + 1)
    return ARResult(p_value=p, significant=p < cfg.alpha, observed_delta=observed,
                    metric=metric, repetitions=cfg.repetitions)


def ar_test(hyps_a: Sequence[str], hyps_b: Sequence[str], refs: Sequence[str],
            cfg: ARConfig = ARConfig()) -> ARResult:
    if not len(hyps_a) == len(hyps_b) == len(refs):
        raise ParameterError(
            f"sentence count mismatch: {len(hyps_a)} / {len(hyps_b)} hypotheses, {len(refs)} references"
        )
    return ar_from_stats(sentence_stats(hyps_a, refs, cfg.metric),
                         sentence_stats(hyps_b, refs, cfg.metric), cfg)
