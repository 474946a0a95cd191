"""End-to-end baseline vs. CBSMT run over a corpus directory."""

import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Dict, Optional

from .align import build_phrase_table
from .corpus import SPLITS, corpus_stats, char_tokenize, load_parallel
from .decoder import Decoder, DecoderConfig, normalize_sentences
from .errors import DataError
from .lm import train_lm
from .metrics import evaluate
from .significance import METRICS, ARConfig, ar_test
from .tuner import TuneConfig, tune

log = logging.getLogger(__name__)

_SYSTEM = {
    "type": "object",
    "required": ["cer", "ter", "bleu"],
    "properties": {m: {"type": "number", "minimum": 0} for m in METRICS},
}
_STATS = {
    "type": "object",
    "required": ["sentences", "tokens_src", "tokens_tgt", "vocab_src", "vocab_tgt", "nonmodern_words"],
    "additionalProperties": {"type": "integer", "minimum": 0},
}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["corpus", "seed", "stats", "weights", "systems", "significance"],
    "properties": {
        "corpus": {"type": "string"},
        "seed": {"type": "integer"},
        "stats": {"type": "object", "required": list(SPLITS),
                  "additionalProperties": _STATS},
        "weights": {
            "type": "object",
            "required": ["tm_fwd", "tm_rev", "lm", "penalty"],
            "additionalProperties": {"type": "number"},
        },
        "systems": {"type": "object", "required": ["Baseline", "CBSMT"],
                    "additionalProperties": _SYSTEM},
        "significance": {
            "type": "object",
            "required": list(METRICS),
            "additionalProperties": {
                "type": "object",
                "required": ["p_value", "significant", "observed_delta"],
                "properties": {
                    "p_value": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                    "significant": {"type": "boolean"},
                    "observed_delta": {"type": "number", "minimum": 0},
                },
            },
        },
    },
}


def load_splits(corpus_dir):
    corpus_dir = Path(corpus_dir)
    splits = {}
    for split in SPLITS:
        src, tgt = corpus_dir / f"{split}.src", corpus_dir / f"{split}.tgt"
        for path in (src, tgt):
            if not path.is_file():
                raise DataError(f"missing corpus file: {path}")
        splits[split] = load_parallel(src, tgt, name=corpus_dir.name, split=split)
    return splits


def reproduce(corpus_dir, seed: int = 0, order: int = 5, max_len: int = 6,
              tune_cfg: Optional[TuneConfig] = None, dec_cfg: Optional[DecoderConfig] = None,
              repetitions: int = 10000, alpha: float = 0.05, threads: int = 1,
              out_dir=None) -> Dict:
    """Train on train, tune on dev, score baseline and CBSMT on test."""
    splits = load_splits(corpus_dir)
    tune_cfg = tune_cfg or TuneConfig(seed=seed)
    dec_cfg = dec_cfg or DecoderConfig(max_len=max_len)
    train, dev, test = splits["train"], splits["dev"], splits["test"]

    log.info("training phrase table and %d-gram LM on %d pairs", order, len(train))
    table = build_phrase_table(train, max_len=max_len)
    lm = train_lm([char_tokenize(t) for t in train.targets], order)
    decoder = Decoder(table, lm, dec_cfg)

    log.info("tuning on %d dev pairs", len(dev))
    result = tune(dev, decoder, tune_cfg, threads)
    hyps, _ = normalize_sentences(test.sources, decoder, result.weights, threads)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "test.hyp").write_text("".join(h + "\n" for h in hyps), encoding="utf-8")

    baseline = evaluate(test.sources, test.targets)
    system = evaluate(hyps, test.targets)
    significance = {}
    for metric in METRICS:
        ar = ar_test(hyps, test.sources, test.targets,
                     ARConfig(repetitions=repetitions, alpha=alpha, seed=seed, metric=metric))
        significance[metric] = {"p_value": ar.p_value, "significant": ar.significant,
                                "observed_delta": ar.observed_delta}
    return {
        "corpus": Path(corpus_dir).name,
        "seed": seed,
        "stats": {name: asdict(corpus_stats(c)) for name, c in splits.items()},
        "weights": dict(zip(("tm_fwd", "tm_rev", "lm", "penalty"), result.weights.as_tuple())),
        "systems": {
            "Baseline": {"cer": baseline.cer, "ter": baseline.ter, "bleu": baseline.bleu},
            "CBSMT": {"cer": system.cer, "ter": system.ter, "bleu": system.bleu},
        },
        "significance": significance,
    }


def format_table(report: Dict) -> str:
    """Aligned text rendering: one row per system, a dagger on CBSMT cells
    whose difference from the baseline is *not* significant."""
    lines = [f"{'System':<10}{'CER [↓]':>10}{'TER [↓]':>10}{'BLEU [↑]':>10}"]
    for name, scores in report["systems"].items():
        cells = []
        for metric in METRICS:
            mark = ""
            if name != "Baseline" and not report["significance"][metric]["significant"]:
                mark = "†"
            cells.append(f"{scores[metric]:.1f}{mark}")
        lines.append(f"{name:<10}" + "".join(f"{c:>10}" for c in cells))
    return "\n".join(lines) + "\n"


def dump_report(report: Dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
