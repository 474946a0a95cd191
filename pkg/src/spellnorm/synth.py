"""Synthetic historical/modern parallel data with known rewrite rules.

Rules rewrite *modern* text into an older-looking spelling, so the degraded
text is the source side and the untouched modern text the target side.
"""

import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .corpus import ParallelCorpus, write_lines
from .errors import DataError

CONTEXTS = ("word-initial", "word-final", "anywhere")


@dataclass(frozen=True)
class Rule:
    context: str
    src: str  # modern segment that is matched
    tgt: str  # historical replacement
    prob: float

    def __post_init__(self):
        if self.context not in CONTEXTS:
            raise ValueError(f"unknown rule context {self.context!r}")
        if not self.src:
            raise ValueError("a rule needs a non-empty segment to match")
        if not 0.0 <= self.prob <= 1.0:
            raise ValueError(f"rule probability out of range: {self.prob}")

    def matches(self, text: str, i: int) -> bool:
        if not text.startswith(self.src, i):
            return False
        if self.context == "word-initial" and i > 0 and not text[i - 1].isspace():
            return False
        end = i + len(self.src)
        if self.context == "word-final" and end < len(text) and text[end].isalpha():
            return False
        return True


RuleSet = Tuple[Rule, ...]

# Spanish-flavoured spelling variation: u/v confusion, x for j, ç for z, doubled s,
# plus dropped accents.
DEFAULT_RULES: RuleSet = (
    Rule("word-initial", "u", "v", 0.9),
    Rule("word-initial", "h", "", 0.6),
    Rule("anywhere", "v", "u", 0.6),
    Rule("anywhere", "j", "x", 0.8),
    Rule("anywhere", "z", "ç", 0.8),
    Rule("anywhere", "ce", "ze", 0.7),
    Rule("anywhere", "ci", "zi", 0.7),
    Rule("anywhere", "eso", "esso", 0.8),
    Rule("anywhere", "esa", "essa", 0.8),
    Rule("anywhere", "ái", "ay", 0.8),
    Rule("anywhere", "éi", "ey", 0.8),
    Rule("anywhere", "aba", "aua", 0.5),
    Rule("anywhere", "á", "a", 0.8),
    Rule("anywhere", "é", "e", 0.8),
    Rule("anywhere", "í", "i", 0.8),
    Rule("anywhere", "ó", "o", 0.8),
    Rule("anywhere", "ú", "u", 0.8),
)

# Modern vocabulary for generated sentences.  No two entries collapse onto
# the same string under the default rules, so every rewrite is recoverable.
MODERN_WORDS = (
    "el la los las un una uno unos de del y a en con por para no se me le lo mi "
    "su sus que como pero ni ya muy bien mal más así aquí allí también después "
    "nunca siempre ahora hoy mañana noche día días vez veces año casa puerta "
    "calle ciudad campo mundo tierra cielo agua fuego luz paz guerra vida muerte "
    "hombre mujer hijo hija padre madre señor señora amigo mozo caballero "
    "escudero rey reina dama paja cebada pan vino bocado comida cena corazón "
    "razón fuerza cabeza mano ojos cara voz palabra cosa parte verdad mentira "
    "deja dijo dice digo hizo hace hacer decir ver vio viene venir ir va fue "
    "era es son está estáis sabéis tenéis había tenía decía quería podía "
    "trabaja trabajaba estaba andaba hablaba miraba llevaba buscaba esperaba "
    "bajo lejos viejo joven ojo mejor peor cinco cerca gracias necesidad "
    "eso esa esos esas aquel aquella este otro otra todo toda todos nada algo "
    "gran grande pequeño nuevo buen bueno buena largo corto alto delgado "
    "caballo camino aventura batalla libro historia nombre tiempo mucho poco "
    "último única útil ocasión canción pasión estación vuestra merced salid "
    "fuera remedio bosque"
).split()

PUNCT_END = (".", ".", ".", "?", "!")


def generate_modern(n: int, seed: int = 0, min_words: int = 4, max_words: int = 14) -> List[str]:
    """Sample `n` modern sentences with Zipf-like word frequencies."""
    rng = random.Random(f"modern:{seed}")
    words = list(MODERN_WORDS)
    weights = [1.0 / (rank + 1) ** 0.5 for rank in range(len(words))]
    sentences = []
    for _ in range(n):
        k = rng.randint(min_words, max_words)
        toks = rng.choices(words, weights=weights, k=k)
        if k > 6 and rng.random() < 0.3:
            pos = rng.randrange(2, k - 2)
            toks[pos] += ","
        toks[0] = toks[0][0].upper() + toks[0][1:]
        sentences.append(" ".join(toks) + rng.choice(PUNCT_END))
    return sentences


def apply_rules(sentence: str, rules: Sequence[Rule], rng: random.Random) -> Tuple[str, List[Rule]]:
    """Rewrite left to right without overlaps.  Every rule matching at the
    current position gets one draw, in rule order; the first success wins."""
    out = []
    applied = []
    i = 0
    while i < len(sentence):
        for rule in rules:
            if rule.matches(sentence, i) and rng.random() < rule.prob:
                out.append(rule.tgt)
                applied.append(rule)
                i += len(rule.src)
                break
        else:
            out.append(sentence[i])
            i += 1
    return "".join(out), applied


def degrade(modern: Sequence[str], rules: Sequence[Rule] = DEFAULT_RULES, seed: int = 0,
            name: str = "synthetic", split: str = "train",
            applied: Optional[Counter] = None) -> ParallelCorpus:
    """Historical-looking source side from modern target sentences.  If
    `applied` is given, it receives a count per fired rule."""
    rng = random.Random(f"degrade:{seed}")
    pairs = []
    for sentence in modern:
        old, fired = apply_rules(sentence, rules, rng)
        if applied is not None:
            applied.update(fired)
        pairs.append((old, sentence))
    return ParallelCorpus(tuple(pairs), name=name, split=split)


def read_rules(path) -> RuleSet:
    rules = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        try:
            if len(parts) != 4:
                raise ValueError(f"expected 4 tab-separated fields, got {len(parts)}")
            rules.append(Rule(parts[0], parts[1], parts[2], float(parts[3])))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad rule ({exc})") from None
    return tuple(rules)


def write_rules(rules: Sequence[Rule], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("# context\tsrc\ttgt\tprob\n")
        for r in rules:
            f.write(f"{r.context}\t{r.src}\t{r.tgt}\t{r.prob!r}\n")


def make_splits(out_dir, sizes=(2000, 200, 200), rules: Sequence[Rule] = DEFAULT_RULES,
                seed: int = 42) -> Path:
    """Write train/dev/test .src/.tgt files of a synthetic corpus."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    modern = generate_modern(sum(sizes), seed=seed)
    corpus = degrade(modern, rules, seed=seed)
    start = 0
    for split, size in zip(("train", "dev", "test"), sizes):
        chunk = corpus.pairs[start:start + size]
        start += size
        write_lines(out_dir / f"{split}.src", [s for s, _ in chunk])
        write_lines(out_dir / f"{split}.tgt", [t for _, t in chunk])
    return out_dir
