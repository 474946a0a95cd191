"""Character-based SMT for historical spelling normalization."""

__version__ = "0.1.0"

from .align import PhraseTable, build_phrase_table, read_table, write_table
from .corpus import ParallelCorpus, char_tokenize, corpus_stats, detokenize, load_parallel
from .decoder import Decoder, DecoderConfig, FeatureWeights, decode, normalize_sentences
from .lm import NGramLM, lm_logprob, read_arpa, train_lm, write_arpa
from .metrics import bleu, cer, evaluate, ter
from .significance import ARConfig, ar_test
from .synth import DEFAULT_RULES, degrade, make_splits
from .tuner import TuneConfig, tune, tune_weights

__all__ = [
    "ARConfig", "DEFAULT_RULES", "Decoder", "DecoderConfig", "FeatureWeights", "NGramLM",
    "ParallelCorpus", "PhraseTable", "TuneConfig", "ar_test", "bleu", "build_phrase_table",
    "cer", "char_tokenize", "corpus_stats", "decode", "degrade", "detokenize", "evaluate",
    "lm_logprob", "load_parallel", "make_splits", "normalize_sentences", "read_arpa",
    "read_table", "ter", "train_lm", "tune", "tune_weights", "write_arpa", "write_table",
]
