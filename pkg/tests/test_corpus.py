import json

import pytest
from hypothesis import given, strategies as st

from spellnorm.corpus import (
    BOUNDARY, CorpusStats, ParallelCorpus, char_tokenize, check_charseq, corpus_stats,
    detokenize, load_parallel, nonmodern_count, parse_symbol, read_lines, render_symbol,
    repair_charseq,
)
from spellnorm.errors import AlignmentError, CorpusDecodeError, DataError, InvariantError

B = BOUNDARY


def write(path, text, mode="w"):
    if mode == "wb":
        path.write_bytes(text)
    else:
        path.write_text(text, encoding="utf-8")
    return path


class TestTokenize:
    def test_word_boundary(self):
        assert char_tokenize("vn bocado") == ("v", "n", B, "b", "o", "c", "a", "d", "o")

    def test_empty(self):
        assert char_tokenize("") == ()
        assert detokenize(()) == ""

    def test_whitespace_runs_collapse(self):
        assert char_tokenize("a  b") == ("a", B, "b")
        assert char_tokenize(" a\tb ") == ("a", B, "b")

    def test_detokenize_inverse(self):
        assert detokenize(("v", "n", B, "b", "o", "c", "a", "d", "o")) == "vn bocado"

    @pytest.mark.parametrize("bad", [(B, "a"), ("a", B), ("a", B, B, "b"), ("a", " ", "b")])
    def test_malformed_rejected(self, bad):
        with pytest.raises(InvariantError):
            detokenize(bad)

    @given(st.text())
    def test_no_raw_whitespace(self, s):
        seq = char_tokenize(s)
        check_charseq(seq)
        assert not any(c.isspace() for c in seq if c != B)

    @given(st.text())
    def test_round_trip(self, s):
        assert detokenize(char_tokenize(s)) == " ".join(s.split())

    def test_repair_counts_removed_markers(self):
        assert repair_charseq((B, "a", B, B, "b", B)) == (("a", B, "b"), 3)
        assert repair_charseq(("a", "b")) == (("a", "b"), 0)


def test_symbol_rendering_round_trips():
    for sym in (B, "▁", "a", "ç"):
        assert parse_symbol(render_symbol(sym)) == sym
    assert render_symbol(B) == "▁"


class TestLoading:
    def test_three_lines(self, tmp_path):
        src = write(tmp_path / "a.src", "vn\ndexa\nesso\n")
        tgt = write(tmp_path / "a.tgt", "un\ndeja\neso")
        c = load_parallel(src, tgt, name="x", split="dev")
        assert len(c) == 3 and c.pairs[1] == ("dexa", "deja") and c.split == "dev"

    def test_count_mismatch_names_both(self, tmp_path):
        src = write(tmp_path / "a.src", "1\n2\n3\n4\n")
        tgt = write(tmp_path / "a.tgt", "1\n2\n3\n4\n5\n")
        with pytest.raises(AlignmentError, match=r"4.*5"):
            load_parallel(src, tgt)

    def test_bad_utf8_reports_line(self, tmp_path):
        src = write(tmp_path / "a.src", b"ok\n\xff\xfe\n", mode="wb")
        with pytest.raises(CorpusDecodeError, match=":2:"):
            read_lines(src)

    def test_lines_are_stripped(self, tmp_path):
        assert read_lines(write(tmp_path / "x", "  a b \n\tc\n")) == ["a b", "c"]

    def test_empty_corpus_rejected(self):
        with pytest.raises(DataError):
            ParallelCorpus(())

    def test_bad_split_rejected(self):
        with pytest.raises(ValueError):
            ParallelCorpus((("a", "a"),), split="validation")


class TestStats:
    def test_identity_corpus_has_no_nonmodern_words(self):
        c = ParallelCorpus((("a b", "a b"), ("c", "c")))
        assert corpus_stats(c).nonmodern_words == 0

    def test_toy_counts_by_hand(self):
        c = ParallelCorpus((("vn bocado de pan", "un bocado de pan"), ("dexa esso esso", "deja eso")))
        s = corpus_stats(c)
        # src tokens 4+3, tgt 4+2; src types {vn,bocado,de,pan,dexa,esso}
        # nonmodern: vn; then dexa->deja, esso->eso, esso->gap
        assert s == CorpusStats(2, 7, 6, 6, 6, 4)

    def test_nonmodern_counts_deletions_only_on_source(self):
        assert nonmodern_count("a b", "a x b") == 0
        assert nonmodern_count("a x b", "a b") == 1

    def test_vocab_bounded_by_tokens(self, small_corpus):
        s = corpus_stats(small_corpus)
        assert s.vocab_src <= s.tokens_src and s.vocab_tgt <= s.tokens_tgt

    def test_permutation_invariant(self, small_corpus):
        rev = ParallelCorpus(tuple(reversed(small_corpus.pairs)))
        assert corpus_stats(rev) == corpus_stats(small_corpus)

    def test_serializations(self):
        s = CorpusStats(1, 2, 3, 1, 2, 0)
        assert json.loads(s.to_json())["tokens_tgt"] == 3
        header, row = s.to_tsv().splitlines()
        assert header.split("\t")[0] == "sentences" and row.split("\t") == ["1", "2", "3", "1", "2", "0"]
