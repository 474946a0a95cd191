"""Parallel corpora, character sequences and corpus statistics."""

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

from . import _edit
from .errors import AlignmentError, CorpusDecodeError, DataError, InvariantError

# Word boundaries inside a character sequence.  A private-use scalar so it can
# never collide with corpus text; serialized files show it as RENDERED_BOUNDARY.
BOUNDARY = "\ue000"
RENDERED_BOUNDARY = "▁"

SPLITS = ("train", "dev", "test")

CharSequence = Tuple[str, ...]


@dataclass(frozen=True)
class ParallelCorpus:
    pairs: Tuple[Tuple[str, str], ...]
    name: str = "corpus"
    split: str = "train"

    def __post_init__(self):
        if self.split not in SPLITS:
            raise ValueError(f"unknown split {self.split!r}; expected one of {SPLITS}")
        if not self.pairs:
            raise DataError("a parallel corpus needs at least one pair")

    def __len__(self):
        return len(self.pairs)

    @property
    def sources(self) -> List[str]:
        return [s for s, _ in self.pairs]

    @property
    def targets(self) -> List[str]:
        return [t for _, t in self.pairs]


@dataclass(frozen=True)
class CorpusStats:
    sentences: int
    tokens_src: int
    tokens_tgt: int
    vocab_src: int
    vocab_tgt: int
    nonmodern_words: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def to_tsv(self) -> str:
        fields = list(asdict(self))
        values = [str(v) for v in asdict(self).values()]
        return "\t".join(fields) + "\n" + "\t".join(values) + "\n"


def read_lines(path) -> List[str]:
    """Read one sentence per line, stripped.  A trailing newline is optional."""
    path = Path(path)
    raw = path.read_bytes()
    lines = raw.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    out = []
    for lineno, line in enumerate(lines, 1):
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusDecodeError(f"{path}:{lineno}: invalid UTF-8 ({exc.reason})") from None
        out.append(text.strip())
    return out


def load_parallel(source_path, target_path, name: str = "corpus", split: str = "train") -> ParallelCorpus:
    src = read_lines(source_path)
    tgt = read_lines(target_path)
    if len(src) != len(tgt):
        raise AlignmentError(
            f"line-count mismatch: {source_path} has {len(src)} lines, {target_path} has {len(tgt)}"
        )
    return ParallelCorpus(tuple(zip(src, tgt)), name=name, split=split)


def char_tokenize(sentence: str) -> CharSequence:
    """Split a sentence into characters, one BOUNDARY per whitespace run."""
    symbols: List[str] = []
    for word in sentence.split():
        if symbols:
            symbols.append(BOUNDARY)
        symbols.extend(word)
    return tuple(symbols)


def check_charseq(symbols: Sequence[str]) -> None:
    if not symbols:
        return
    if symbols[0] == BOUNDARY or symbols[-1] == BOUNDARY:
        raise InvariantError("character sequence starts or ends with a word boundary")
    prev = None
    for sym in symbols:
        if sym == BOUNDARY and prev == BOUNDARY:
            raise InvariantError("character sequence has adjacent word boundaries")
        if sym != BOUNDARY and sym.isspace():
            raise InvariantError(f"character sequence contains raw whitespace {sym!r}")
        prev = sym


def detokenize(symbols: Sequence[str]) -> str:
    check_charseq(symbols)
    return "".join(" " if s == BOUNDARY else s for s in symbols)


def repair_charseq(symbols: Sequence[str]) -> Tuple[CharSequence, int]:
    """Drop edge and duplicated boundaries.  Returns the fixed sequence and how
    many markers were removed."""
    out: List[str] = []
    removed = 0
    for sym in symbols:
        if sym == BOUNDARY and (not out or out[-1] == BOUNDARY):
            removed += 1
            continue
        out.append(sym)
    while out and out[-1] == BOUNDARY:
        out.pop()
        removed += 1
    return tuple(out), removed


def render_symbol(sym: str) -> str:
    if sym == BOUNDARY:
        return RENDERED_BOUNDARY
    if sym == RENDERED_BOUNDARY:
        return "<U+2581>"
    return sym


def parse_symbol(token: str) -> str:
    if token == RENDERED_BOUNDARY:
        return BOUNDARY
    if token == "<U+2581>":
        return RENDERED_BOUNDARY
    return token


def nonmodern_count(source: str, target: str) -> int:
    """Source words aligned to a different target word or to nothing."""
    ops = _edit.backtrace(source.split(), target.split())
    return sum(1 for op in ops if op[0] in (_edit.SUB, _edit.DEL))


def corpus_stats(corpus: ParallelCorpus) -> CorpusStats:
    src_tokens = 0
    tgt_tokens = 0
    src_vocab = set()
    tgt_vocab = set()
    nonmodern = 0
    for src, tgt in corpus.pairs:
        sw, tw = src.split(), tgt.split()
        src_tokens += len(sw)
        tgt_tokens += len(tw)
        src_vocab.update(sw)
        tgt_vocab.update(tw)
        nonmodern += nonmodern_count(src, tgt)
    return CorpusStats(
        sentences=len(corpus),
        tokens_src=src_tokens,
        tokens_tgt=tgt_tokens,
        vocab_src=len(src_vocab),
        vocab_tgt=len(tgt_vocab),
        nonmodern_words=nonmodern,
    )


def write_lines(path, lines: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            f.write(line + "\n")
