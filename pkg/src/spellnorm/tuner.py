"""Dev-set weight tuning by coordinate ascent with random restarts.

Each candidate weight vector is scored by decoding the whole dev set and
computing the corpus metric, so no sentence-level approximation is involved.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from . import metrics
from .corpus import ParallelCorpus
from .decoder import Decoder, FeatureWeights, normalize_sentences
from .errors import DecodeError, ParameterError

log = logging.getLogger(__name__)

OBJECTIVES = ("bleu", "cer", "ter")
# best attainable value per objective (maximize form); reaching it ends a climb
CEILING = {"bleu": 100.0, "cer": 0.0, "ter": 0.0}


@dataclass(frozen=True)
class TuneConfig:
    objective: str = "bleu"
    restarts: int = 8
    iterations: int = 20
    seed: int = 0
    initial_step: float = 1.0
    min_step: float = 1.0 / 64

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ParameterError(f"unknown objective {self.objective!r}; expected one of {OBJECTIVES}")
        if self.restarts < 1 or self.iterations < 1:
            raise ParameterError("restarts and iterations must both be >= 1")


@dataclass
class TuneResult:
    weights: FeatureWeights
    objective: float  # maximized: BLEU, or minus CER/TER
    traces: List[List[float]] = field(default_factory=list)


def objective_value(hyps: Sequence[str], refs: Sequence[str], objective: str) -> float:
    """Metric in maximize form."""
    if objective == "bleu":
        return metrics.bleu(hyps, refs)
    if objective == "cer":
        return -metrics.cer(hyps, refs)
    return -metrics.ter(hyps, refs)


class _Evaluator:
    def __init__(self, dev: ParallelCorpus, decoder: Decoder, objective: str):
        self.sources = dev.sources
        self.refs = dev.targets
        self.decoder = decoder
        self.objective = objective
        self._memo: Dict[Tuple[float, ...], float] = {}

    def __call__(self, w: Tuple[float, ...]) -> float:
        if w in self._memo:
            return self._memo[w]
        weights = FeatureWeights.from_tuple(w)
        try:
            hyps, _ = normalize_sentences(self.sources, self.decoder, weights)
        except DecodeError:
            log.error("decoding the dev set failed with weights %s", weights)
            raise
        value = self._memo[w] = objective_value(hyps, self.refs, self.objective)
        return value


def _start_point(restart: int, seed: int) -> List[float]:
    if restart == 0:
        return [1.0, 1.0, 1.0, 1.0]
    rng = random.Random(f"tune:{seed}:{restart}")
    return [rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)]


def _climb(evaluate: _Evaluator, start: List[float], cfg: TuneConfig) -> Tuple[List[float], float, List[float]]:
    w = list(start)
    best = evaluate(tuple(w))
    trace = [best]
    step = cfg.initial_step
    ceiling = CEILING[evaluate.objective]
    for _ in range(cfg.iterations):
        if best >= ceiling:
            break
        improved = False
        for k in range(len(w)):
            for delta in (step, -step):
                cand = list(w)
                cand[k] += delta
                if not any(cand):
                    continue
                value = evaluate(tuple(cand))
                if value > best:
                    w, best = cand, value
                    trace.append(best)
                    improved = True
                    break
        if not improved:
            step /= 2
            if step < cfg.min_step:
                break
    return w, best, trace


_job = None


def _init_job(dev, decoder, cfg):
    global _job
    _job = (_Evaluator(dev, decoder, cfg.objective), cfg)


def _run_restart(restart: int):
    evaluate, cfg = _job
    return _climb(evaluate, _start_point(restart, cfg.seed), cfg)


def tune(dev: ParallelCorpus, decoder: Decoder, cfg: TuneConfig = TuneConfig(), threads: int = 1) -> TuneResult:
    if threads > 1 and cfg.restarts > 1:
        with ProcessPoolExecutor(threads, initializer=_init_job, initargs=(dev, decoder, cfg)) as pool:
            runs = list(pool.map(_run_restart, range(cfg.restarts)))
    else:
        evaluate = _Evaluator(dev, decoder, cfg.objective)
        runs = []
        for r in range(cfg.restarts):
            runs.append(_climb(evaluate, _start_point(r, cfg.seed), cfg))
            # later restarts can only tie, and ties go to the earlier one
            if runs[-1][1] >= CEILING[cfg.objective]:
                break
    best_w, best_value, _ = runs[0]
    for w, value, _ in runs[1:]:
        if value > best_value:
            best_w, best_value = w, value
    for r, (w, value, trace) in enumerate(runs):
        log.info("restart %d: objective %.4f after %d accepted steps", r, value, len(trace) - 1)
    return TuneResult(FeatureWeights.from_tuple(best_w), best_value, [t for _, _, t in runs])


def tune_weights(dev: ParallelCorpus, decoder: Decoder, cfg: TuneConfig = TuneConfig(),
                 threads: int = 1) -> FeatureWeights:
    return tune(dev, decoder, cfg, threads).weights
