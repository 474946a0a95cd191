"""Unit-cost Levenshtein distance and its deterministic backtrace.

Shared by character alignment, the |W| statistic and the metric op counts.
"""

from typing import List, Optional, Sequence, Tuple

MATCH, SUB, DEL, INS = "M", "S", "D", "I"

EditOp = Tuple[str, Optional[int], Optional[int]]


def distance(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def _table(a: Sequence, b: Sequence) -> List[List[int]]:
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        row, up = d[i], d[i - 1]
        row[0] = i
        x = a[i - 1]
        for j in range(1, len(b) + 1):
            row[j] = min(up[j] + 1, row[j - 1] + 1, up[j - 1] + (x != b[j - 1]))
    return d


def backtrace(a: Sequence, b: Sequence) -> List[EditOp]:
    """Minimal edit script from `a` to `b`, in left-to-right order.

    When several predecessors tie, match beats substitution beats deletion
    beats insertion.  Deletions consume a symbol of `a`, insertions one of `b`.
    """
    d = _table(a, b)
    ops: List[EditOp] = []
    i, j = len(a), len(b)
    while i > 0 or j > 0:
        here = d[i][j]
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and here == d[i - 1][j - 1]:
            ops.append((MATCH, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and here == d[i - 1][j - 1] + 1:
            ops.append((SUB, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and here == d[i - 1][j] + 1:
            ops.append((DEL, i - 1, None))
            i -= 1
        else:
            ops.append((INS, None, j - 1))
            j -= 1
    ops.reverse()
    return ops


def op_counts(ops: Sequence[EditOp]) -> Tuple[int, int, int]:
    """(insertions, deletions, substitutions) in an edit script."""
    ins = sum(1 for op in ops if op[0] == INS)
    dels = sum(1 for op in ops if op[0] == DEL)
    subs = sum(1 for op in ops if op[0] == SUB)
    return ins, dels, subs
