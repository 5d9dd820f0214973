"""Both kernel implementations must agree with each other and with a
plain DP oracle, on short and long (multi-word) queries alike."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_levenshtein
from execbench._kernels import (
    _levenshtein_many_np,
    _order_stats_np,
    HAVE_NUMBA,
    encode_sequences,
    levenshtein_many,
    order_stats,
)

if HAVE_NUMBA:
    from execbench._kernels import _levenshtein_many_nb, _order_stats_nb


def _pad(seqs):
    width = max(len(s) for s in seqs)
    pool = np.full((len(seqs), width), -1, dtype=np.int32)
    lens = np.zeros(len(seqs), dtype=np.int32)
    for i, s in enumerate(seqs):
        pool[i, : len(s)] = s
        lens[i] = len(s)
    return pool, lens


token_lists = st.lists(st.integers(0, 6), min_size=1, max_size=12)


@given(query=token_lists, pool_seqs=st.lists(token_lists, min_size=1, max_size=8))
@settings(max_examples=200, deadline=None)
def test_levenshtein_matches_naive_dp(query, pool_seqs):
    pool, lens = _pad(pool_seqs)
    q = np.array(query, dtype=np.int32)
    got = levenshtein_many(q, pool, lens)
    expected = [naive_levenshtein(query, s) for s in pool_seqs]
    assert list(got) == expected


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
@pytest.mark.parametrize("query_len", [1, 5, 63, 64, 65, 90])
def test_implementations_agree_across_word_boundary(query_len):
    rng = np.random.default_rng(query_len)
    for _ in range(40):
        q = rng.integers(0, 9, size=query_len).astype(np.int32)
        seqs = [list(rng.integers(0, 12, size=int(rng.integers(1, 100)))) for _ in range(6)]
        pool, lens = _pad(seqs)
        assert list(_levenshtein_many_nb(q, pool, lens)) == list(_levenshtein_many_np(q, pool, lens))


def test_empty_query_distance_is_pool_length():
    pool, lens = _pad([[1, 2, 3], [4]])
    got = levenshtein_many(np.zeros(0, dtype=np.int32), pool, lens)
    assert list(got) == [3, 1]


def _naive_order_stats(seqs, freqs, n_symbols):
    traces_with = np.zeros(n_symbols, dtype=np.int64)
    cooccur = np.zeros((n_symbols, n_symbols), dtype=np.int64)
    before = np.zeros((n_symbols, n_symbols), dtype=np.int64)
    for seq, f in zip(seqs, freqs):
        present = set(seq)
        for x in present:
            traces_with[x] += f
        for x in present:
            for y in present:
                if x != y:
                    cooccur[x, y] += f
                # some x occurrence strictly before some y occurrence
                if any(a == x and b == y for i, a in enumerate(seq) for b in seq[i + 1 :]):
                    before[x, y] += f
    for x in range(n_symbols):
        cooccur[x, x] = before[x, x]
    return traces_with, cooccur, before


@given(seqs=st.lists(st.lists(st.integers(0, 4), min_size=1, max_size=7), min_size=1, max_size=6))
@settings(max_examples=150, deadline=None)
def test_order_stats_matches_naive_count(seqs):
    freqs = np.ones(len(seqs), dtype=np.int64)
    pool, lens = _pad(seqs)
    got = order_stats(pool, lens.astype(np.int64), freqs, 5)
    expected = _naive_order_stats(seqs, freqs, 5)
    for g, e in zip(got, expected):
        assert np.array_equal(g, e)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
def test_order_stats_implementations_agree():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(1, 12))
        seqs = [list(rng.integers(0, 6, size=int(rng.integers(1, 9)))) for _ in range(n)]
        freqs = rng.integers(1, 5, size=n).astype(np.int64)
        pool, lens = _pad(seqs)
        a = _order_stats_nb(pool, lens.astype(np.int64), freqs, 6)
        b = _order_stats_np(pool, lens.astype(np.int64), freqs, 6)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)


def test_order_stats_diagonal_counts_repeats():
    seqs = [[0, 1, 0], [1], [0]]
    pool, lens = _pad(seqs)
    traces_with, cooccur, before = order_stats(
        pool, lens.astype(np.int64), np.array([1, 1, 1], dtype=np.int64), 2
    )
    assert traces_with[0] == 2 and traces_with[1] == 2
    assert cooccur[0, 0] == 1  # only the repeating trace
    assert cooccur[1, 1] == 0
    assert cooccur[0, 1] == cooccur[1, 0] == 1
    assert before[0, 1] == 1 and before[1, 0] == 1 and before[0, 0] == 1


def test_encode_sequences_grows_vocabulary():
    vocab = {}
    tokens, lengths = encode_sequences([("a", "b"), ("b", "c", "a")], vocab)
    assert vocab == {"a": 0, "b": 1, "c": 2}
    assert tokens.shape == (2, 3)
    assert list(lengths) == [2, 3]
    assert tokens[0, 2] == -1
