import pytest
from hypothesis import settings

from spellnorm.align import build_phrase_table
from spellnorm.corpus import ParallelCorpus, char_tokenize
from spellnorm.decoder import Decoder, DecoderConfig
from spellnorm.lm import train_lm
from spellnorm.synth import DEFAULT_RULES, degrade, generate_modern

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def small_corpus():
    """300 synthetic pairs: big enough to learn the default rules, small enough to be quick."""
    return degrade(generate_modern(300, seed=7), DEFAULT_RULES, seed=7)


@pytest.fixture(scope="session")
def small_models(small_corpus):
    table = build_phrase_table(small_corpus, max_len=4)
    lm = train_lm([char_tokenize(t) for t in small_corpus.targets], order=4)
    return table, lm


@pytest.fixture(scope="session")
def small_decoder(small_models):
    table, lm = small_models
    return Decoder(table, lm, DecoderConfig(max_len=4))


@pytest.fixture
def toy_pairs():
    return ParallelCorpus((("vn bocado", "un bocado"), ("dexa esso", "deja eso")), name="toy")
