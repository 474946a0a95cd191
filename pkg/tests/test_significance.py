import math

import numpy as np
import pytest

from oracles import exact_ar_p
from spellnorm.errors import ParameterError
from spellnorm.metrics import bleu, cer, ter
from spellnorm.significance import (
    ARConfig, ar_from_stats, ar_test, corpus_score, flip_masks, sentence_stats,
)

REFS = ["el vino es bueno hoy", "un bocado de pan", "deja eso ahora mismo", "vuestra merced salid"]
SYS_A = ["el vino es bueno hoy", "vn bocado de pan", "deja eso ahora mismo", "vuestra merced salid"]
SYS_B = ["el uino es bueno oy", "vn bocado de pan", "dexa esso ahora mismo", "uuestra merced salid"]


def test_defaults():
    cfg = ARConfig()
    assert (cfg.repetitions, cfg.alpha, cfg.metric) == (10000, 0.05, "bleu")


@pytest.mark.parametrize("kwargs", [{"repetitions": 0}, {"alpha": 0.0}, {"alpha": 1.0}, {"metric": "wer"}])
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        ARConfig(**kwargs)


@pytest.mark.parametrize("metric", ["cer", "ter", "bleu"])
def test_identical_systems(metric):
    res = ar_test(SYS_B, SYS_B, REFS, ARConfig(repetitions=500, metric=metric))
    assert res.p_value == 1.0 and not res.significant and res.observed_delta == 0.0


@pytest.mark.parametrize("metric,fn", [("cer", cer), ("ter", ter), ("bleu", bleu)])
def test_pooled_stats_reproduce_corpus_metric(metric, fn):
    stats = sentence_stats(SYS_B, REFS, metric)
    assert corpus_score(stats.sum(axis=0), metric) == pytest.approx(fn(SYS_B, REFS), abs=1e-9)


@pytest.mark.parametrize("metric", ["cer", "ter", "bleu"])
def test_close_to_exact_enumeration(metric):
    a = sentence_stats(SYS_A, REFS, metric)
    b = sentence_stats(SYS_B, REFS, metric)
    observed = abs(corpus_score(a.sum(0), metric) - corpus_score(b.sum(0), metric))
    exact = exact_ar_p(list(a), list(b), lambda rows: corpus_score(np.sum(rows, axis=0), metric), observed)
    reps = 10000
    res = ar_from_stats(a, b, ARConfig(repetitions=reps, metric=metric, seed=5))
    se = math.sqrt(max(exact * (1 - exact), 1e-12) / reps)
    assert abs(res.p_value - exact) <= 3 * se + 1 / reps


def test_symmetric_in_systems():
    cfg = ARConfig(repetitions=2000, seed=3, metric="cer")
    assert ar_test(SYS_A, SYS_B, REFS, cfg) == ar_test(SYS_B, SYS_A, REFS, cfg)


def test_deterministic_and_batch_independent():
    whole = flip_masks(7, 30, seed=9)
    parts = np.vstack([flip_masks(7, 10, seed=9, start=s) for s in (0, 10, 20)])
    assert (whole == parts).all()
    cfg = ARConfig(repetitions=1500, seed=1)
    assert ar_test(SYS_A, SYS_B, REFS, cfg) == ar_test(SYS_A, SYS_B, REFS, cfg)


def test_p_in_range_and_converges(small_corpus):
    hyps = small_corpus.targets[:60]
    base = small_corpus.sources[:60]
    refs = small_corpus.targets[:60]
    p = {r: ar_test(base[:6] + hyps[6:], base, refs, ARConfig(repetitions=r, metric="ter")).p_value
         for r in (1000, 2000)}
    assert all(0 < v <= 1 for v in p.values())
    assert abs(p[1000] - p[2000]) < 2 / math.sqrt(1000)


def test_clear_difference_is_significant(small_corpus):
    res = ar_test(small_corpus.targets[:100], small_corpus.sources[:100], small_corpus.targets[:100],
                  ARConfig(repetitions=1000, metric="cer"))
    assert res.significant and res.p_value == pytest.approx(1 / 1001)


def test_length_mismatch():
    with pytest.raises(ParameterError):
        ar_test(SYS_A, SYS_B[:3], REFS)
