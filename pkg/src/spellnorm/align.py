"""Character alignment and phrase-table estimation."""

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from . import _edit
from .corpus import ParallelCorpus, char_tokenize, parse_symbol, render_symbol
from .errors import DataError, ModelLoadError, ParameterError, TrainingError

Segment = Tuple[str, ...]
Link = Tuple[int, int]

DEFAULT_MAX_LEN = 6
# log10 score given to copy entries that training never produced
IDENTITY_FLOOR = -2.0


@dataclass(frozen=True)
class Alignment:
    links: FrozenSet[Link]

    def __iter__(self):
        return iter(sorted(self.links))

    def __len__(self):
        return len(self.links)


@dataclass(frozen=True)
class PhrasePair:
    src: Segment
    tgt: Segment
    fwd: float  # log10 p(tgt | src)
    rev: float  # log10 p(src | tgt)
    count: float = 0


@dataclass
class PhraseTable:
    entries: Dict[Segment, List[PhrasePair]] = field(default_factory=dict)
    max_len: int = DEFAULT_MAX_LEN

    def get(self, src: Segment) -> List[PhrasePair]:
        return self.entries.get(src, [])

    def __contains__(self, src):
        return src in self.entries

    def __len__(self):
        return sum(len(v) for v in self.entries.values())


def char_align(src: Sequence[str], tgt: Sequence[str]) -> Alignment:
    """Link matched and substituted positions of a minimal edit script."""
    links = frozenset(
        (i, j) for op, i, j in _edit.backtrace(src, tgt) if op in (_edit.MATCH, _edit.SUB)
    )
    return Alignment(links)


def extract_phrases(
    alignment: Alignment, src: Sequence[str], tgt: Sequence[str], max_len: int = DEFAULT_MAX_LEN
) -> List[Tuple[Segment, Segment]]:
    """Alignment-consistent segment pairs, one entry per occurrence.

    Both spans of a pair must start and end on aligned positions (no
    extension over unaligned edges).  Runs of unaligned source positions
    additionally yield deletion pairs with an empty target.
    """
    if max_len < 1:
        raise ParameterError(f"max_len must be >= 1, got {max_len}")
    src_links = defaultdict(list)
    tgt_links = defaultdict(list)
    for i, j in alignment.links:
        src_links[i].append(j)
        tgt_links[j].append(i)

    pairs = []
    n = len(src)
    for i1 in range(n):
        for i2 in range(i1, min(n, i1 + max_len)):
            if i2 not in src_links:
                if all(i not in src_links for i in range(i1, i2 + 1)):
                    pairs.append((tuple(src[i1:i2 + 1]), ()))
                continue
            if i1 not in src_links:
                continue
            js = [j for i in range(i1, i2 + 1) for j in src_links.get(i, ())]
            j1, j2 = min(js), max(js)
            if j2 - j1 + 1 > max_len:
                continue
            if any(not i1 <= i <= i2 for j in range(j1, j2 + 1) for i in tgt_links.get(j, ())):
                continue
            pairs.append((tuple(src[i1:i2 + 1]), tuple(tgt[j1:j2 + 1])))
    return pairs


def count_phrases(pairs: Iterable[Tuple[str, str]], max_len: int) -> Counter:
    counts = Counter()
    for s, t in pairs:
        src, tgt = char_tokenize(s), char_tokenize(t)
        counts.update(extract_phrases(char_align(src, tgt), src, tgt, max_len))
    return counts


def table_from_counts(counts: Counter, max_len: int, min_count: float = 1) -> PhraseTable:
    src_total = Counter()
    tgt_total = Counter()
    for (s, t), c in counts.items():
        src_total[s] += c
        tgt_total[t] += c

    grouped = defaultdict(list)
    for (s, t), c in counts.items():
        if c < min_count:
            continue
        grouped[s].append(PhrasePair(
            s, t, math.log10(c / src_total[s]), math.log10(c / tgt_total[t]), c))

    # every character seen in training can at least be copied
    floor = 10.0 ** IDENTITY_FLOOR
    for (sym,) in sorted(s for s in src_total if len(s) == 1):
        found = any(p.tgt == (sym,) for p in grouped[(sym,)])
        if found:
            continue
        scale = math.log10(1.0 - floor)
        rescaled = [PhrasePair(p.src, p.tgt, p.fwd + scale, p.rev, p.count) for p in grouped[(sym,)]]
        rescaled.append(PhrasePair((sym,), (sym,), IDENTITY_FLOOR, IDENTITY_FLOOR, 0))
        grouped[(sym,)] = rescaled

    entries = {}
    for s in sorted(grouped):
        entries[s] = sorted(grouped[s], key=lambda p: (-p.fwd, p.tgt))
    return PhraseTable(entries, max_len)


def build_phrase_table(corpus: ParallelCorpus, max_len: int = DEFAULT_MAX_LEN, min_count: float = 1) -> PhraseTable:
    if corpus.split != "train":
        raise DataError(f"phrase tables are built from the train split, got {corpus.split!r}")
    if max_len < 1:
        raise ParameterError(f"max_len must be >= 1, got {max_len}")
    counts = count_phrases(corpus.pairs, max_len)
    if not counts:
        raise TrainingError("no phrase pairs could be extracted from the corpus")
    return table_from_counts(counts, max_len, min_count)


def _render(seg: Segment) -> str:
    return " ".join(render_symbol(s) for s in seg)


def _parse(field_text: str) -> Segment:
    if not field_text:
        return ()
    return tuple(parse_symbol(t) for t in field_text.split(" "))


def write_table(table: PhraseTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"# max_len={table.max_len}\n")
        for src in sorted(table.entries):
            for p in table.entries[src]:
                count = int(p.count) if float(p.count).is_integer() else p.count
                f.write(f"{_render(p.src)} ||| {_render(p.tgt)} ||| {p.fwd!r} ||| {p.rev!r} ||| {count}\n")


def read_table(path) -> PhraseTable:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise ModelLoadError(f"cannot read phrase table {path}: {exc}") from None
    table = PhraseTable()
    grouped = defaultdict(list)
    for lineno, line in enumerate(lines, 1):
        if not line:
            continue
        if line.startswith("# max_len="):
            table.max_len = int(line.split("=", 1)[1])
            continue
        fields = line.split(" ||| ")
        try:
            if len(fields) != 5:
                raise ValueError(f"expected 5 fields, got {len(fields)}")
            src = _parse(fields[0])
            if not src:
                raise ValueError("empty source segment")
            grouped[src].append(PhrasePair(src, _parse(fields[1]), float(fields[2]),
                                           float(fields[3]), float(fields[4])))
        except ValueError as exc:
            raise ModelLoadError(f"{path}:{lineno}: malformed phrase-table line ({exc})") from None
    table.entries = {s: grouped[s] for s in sorted(grouped)}
    return table
