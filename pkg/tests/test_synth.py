import random
from collections import Counter

import pytest

from oracles import edit_distance
from spellnorm.corpus import load_parallel
from spellnorm.errors import DataError
from spellnorm.metrics import cer
from spellnorm.synth import (
    DEFAULT_RULES, MODERN_WORDS, Rule, apply_rules, degrade, generate_modern, make_splits, read_rules,
    write_rules,
)

MODERN = ["deja eso ahora", "Un hombre bueno", "vino y pan"]


def test_no_rules_is_identity():
    c = degrade(MODERN, rules=())
    assert c.sources == c.targets == MODERN


def test_zero_probability_is_identity():
    silent = tuple(Rule(r.context, r.src, r.tgt, 0.0) for r in DEFAULT_RULES)
    c = degrade(generate_modern(50, seed=1), silent)
    assert c.sources == c.targets


def test_forced_rule():
    assert degrade(["deja"], (Rule("anywhere", "j", "x", 1.0),)).sources == ["dexa"]


@pytest.mark.parametrize("context,text,expected", [
    ("word-initial", "uno un mudo", "vno vn mudo"),
    ("word-final", "uno mudo", "un mud"),
    ("anywhere", "uno mudo", "vno mvdo"),
])
def test_contexts(context, text, expected):
    src = {"word-final": "o"}.get(context, "u")
    tgt = {"word-final": ""}.get(context, "v")
    out, _ = apply_rules(text, (Rule(context, src, tgt, 1.0),), random.Random(0))
    assert out == expected


def test_left_to_right_without_overlap():
    # "esso" must not then feed the plain s rule
    rules = (Rule("anywhere", "eso", "esso", 1.0), Rule("anywhere", "s", "z", 1.0))
    assert apply_rules("eso", rules, random.Random(0))[0] == "esso"


def test_deterministic():
    a = degrade(generate_modern(30, seed=5), seed=5)
    b = degrade(generate_modern(30, seed=5), seed=5)
    assert a == b and a != degrade(generate_modern(30, seed=5), seed=6)


def test_cer_matches_rule_counts():
    modern = generate_modern(500, seed=8)
    fired = Counter()
    c = degrade(modern, seed=8, applied=fired)
    expected = 100 * sum(n * edit_distance(r.src, r.tgt) for r, n in fired.items()) / sum(map(len, modern))
    assert abs(cer(c.sources, c.targets) - expected) <= 1.0


def test_vocabulary_is_recoverable():
    assert len(set(MODERN_WORDS)) == len(MODERN_WORDS)
    assert all(" " not in w for w in MODERN_WORDS)


def test_rule_validation():
    with pytest.raises(ValueError):
        Rule("middle", "a", "b", 0.5)
    with pytest.raises(ValueError):
        Rule("anywhere", "", "b", 0.5)
    with pytest.raises(ValueError):
        Rule("anywhere", "a", "b", 1.5)


def test_rules_file_round_trip(tmp_path):
    write_rules(DEFAULT_RULES, tmp_path / "rules.tsv")
    assert read_rules(tmp_path / "rules.tsv") == DEFAULT_RULES


def test_bad_rules_file(tmp_path):
    (tmp_path / "r.tsv").write_text("anywhere\tj\tx\n", encoding="utf-8")
    with pytest.raises(DataError, match=":1:"):
        read_rules(tmp_path / "r.tsv")


def test_splits(tmp_path):
    make_splits(tmp_path, sizes=(30, 5, 5), seed=3)
    sizes = {s: len(load_parallel(tmp_path / f"{s}.src", tmp_path / f"{s}.tgt")) for s in ("train", "dev", "test")}
    assert sizes == {"train": 30, "dev": 5, "test": 5}
    first = (tmp_path / "train.src").read_bytes()
    make_splits(tmp_path, sizes=(30, 5, 5), seed=3)
    assert (tmp_path / "train.src").read_bytes() == first


def test_generated_sentences_look_like_sentences():
    for s in generate_modern(50, seed=2):
        assert s[0].isupper() and s[-1] in ".?!" and 4 <= len(s.split()) <= 14
