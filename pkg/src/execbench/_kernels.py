"""Hot numeric kernels, numba-jitted with a pure-numpy fallback.

Two kernels dominate runtime: token-level Levenshtein distances (one query
sequence against a padded batch of candidates) and pairwise activity order
counts over a batch of encoded variants.  The numba path is selected by
default when numba imports; set ``EXECBENCH_KERNELS=numpy`` to force the
fallback, or ``EXECBENCH_KERNELS=numba`` to fail loudly when numba is
missing.  ``benchmarks/bench_kernels.py`` times one path against the other.

Encoding contract: activity tokens are non-negative int32 codes, padding
cells are -1.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConfigError

_FLAG = os.environ.get("EXECBENCH_KERNELS", "auto").strip().lower() or "auto"
if _FLAG not in ("auto", "numba", "numpy"):
    raise ConfigError(
        f"EXECBENCH_KERNELS must be 'numba', 'numpy' or 'auto', got {_FLAG!r}"
    )

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via EXECBENCH_KERNELS=numpy
    HAVE_NUMBA = False

if _FLAG == "numba" and not HAVE_NUMBA:
    raise ConfigError("EXECBENCH_KERNELS=numba, but numba cannot be imported")

USE_NUMBA = HAVE_NUMBA and _FLAG != "numpy"


def _levenshtein_many_np(query: np.ndarray, pool: np.ndarray, pool_lens: np.ndarray) -> np.ndarray:
    """Row-DP over the query, vectorized across all pool rows at once.

    The in-row dependency (each cell needs its left neighbour) is resolved
    with the running-minimum identity
    ``new[j] = min_{k<=j}(t[k] - k) + j`` where ``t`` holds the
    substitution/deletion candidates, so each DP row costs a handful of
    whole-array operations instead of a scalar loop.
    """
    n, width = pool.shape
    offsets = np.arange(width + 1, dtype=np.int32)
    prev = np.tile(offsets, (n, 1))
    for i in range(1, query.shape[0] + 1):
        cost = pool != query[i - 1]
        row = np.empty_like(prev)
        row[:, 0] = i
        np.minimum(prev[:, 1:] + 1, prev[:, :-1] + cost, out=row[:, 1:])
        row -= offsets
        np.minimum.accumulate(row, axis=1, out=row)
        row += offsets
        prev = row
    return prev[np.arange(n), pool_lens].astype(np.int32)


def _order_stats_np(tokens: np.ndarray, lengths: np.ndarray, freqs: np.ndarray, n_symbols: int):
    n_variants, width = tokens.shape
    first = np.full((n_variants, n_symbols), width, dtype=np.int64)
    last = np.full((n_variants, n_symbols), -1, dtype=np.int64)
    rows, positions = np.nonzero(tokens >= 0)
    symbols = tokens[rows, positions]
    np.minimum.at(first, (rows, symbols), positions)
    np.maximum.at(last, (rows, symbols), positions)
    present = last >= 0
    weights = freqs.astype(np.int64)
    traces_with = weights @ present.astype(np.int64)
    pair_present = present[:, :, None] & present[:, None, :]
    before_mask = pair_present & (first[:, :, None] < last[:, None, :])
    before = np.tensordot(weights, before_mask.astype(np.int64), axes=([0], [0]))
    cooccur = np.tensordot(weights, pair_present.astype(np.int64), axes=([0], [0]))
    np.fill_diagonal(cooccur, np.diagonal(before))
    return traces_with, cooccur, before


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _levenshtein_many_nb(query, pool, pool_lens):  # pragma: no cover - jitted
        n, width = pool.shape
        la = query.shape[0]
        out = np.empty(n, dtype=np.int32)
        if la == 0:
            for r in range(n):
                out[r] = pool_lens[r]
            return out
        if la <= 64:
            # Myers' bit-parallel scheme: the DP column fits one machine word,
            # so each candidate token costs a handful of word operations.
            qmax = 0
            for i in range(la):
                if query[i] > qmax:
                    qmax = query[i]
            peq = np.zeros(qmax + 1, dtype=np.uint64)
            one = np.uint64(1)
            zero = np.uint64(0)
            for i in range(la):
                peq[query[i]] |= one << np.uint64(i)
            high = one << np.uint64(la - 1)
            full = ~zero
            for r in range(n):
                pv = full
                mv = zero
                score = la
                for j in range(pool_lens[r]):
                    token = pool[r, j]
                    eq = peq[token] if 0 <= token <= qmax else zero
                    xv = eq | mv
                    xh = (((eq & pv) + pv) ^ pv) | eq
                    ph = mv | ~(xh | pv)
                    mh = pv & xh
                    if ph & high:
                        score += 1
                    elif mh & high:
                        score -= 1
                    ph = (ph << one) | one
                    mh = mh << one
                    pv = mh | ~(xv | ph)
                    mv = ph & xv
                out[r] = score
            return out
        prev = np.empty(width + 1, dtype=np.int32)
        cur = np.empty(width + 1, dtype=np.int32)
        for r in range(n):
            lb = pool_lens[r]
            for j in range(lb + 1):
                prev[j] = j
            for i in range(1, la + 1):
                cur[0] = i
                token = query[i - 1]
                for j in range(1, lb + 1):
                    best = prev[j] + 1
                    if cur[j - 1] + 1 < best:
                        best = cur[j - 1] + 1
                    sub = prev[j - 1] + (0 if pool[r, j - 1] == token else 1)
                    if sub < best:
                        best = sub
                    cur[j] = best
                prev, cur = cur, prev
            out[r] = prev[lb]
        return out

    @njit(cache=True, nogil=True)
    def _order_stats_nb(tokens, lengths, freqs, n_symbols):  # pragma: no cover - jitted
        n_variants = tokens.shape[0]
        traces_with = np.zeros(n_symbols, dtype=np.int64)
        cooccur = np.zeros((n_symbols, n_symbols), dtype=np.int64)
        before = np.zeros((n_symbols, n_symbols), dtype=np.int64)
        first = np.empty(n_symbols, dtype=np.int64)
        last = np.empty(n_symbols, dtype=np.int64)
        for r in range(n_variants):
            weight = freqs[r]
            for s in range(n_symbols):
                first[s] = -1
                last[s] = -1
            for p in range(lengths[r]):
                s = tokens[r, p]
                if first[s] < 0:
                    first[s] = p
                last[s] = p
            for x in range(n_symbols):
                if first[x] < 0:
                    continue
                traces_with[x] += weight
                for y in range(n_symbols):
                    if first[y] < 0:
                        continue
                    if x != y:
                        cooccur[x, y] += weight
                    if first[x] < last[y]:
                        before[x, y] += weight
        for x in range(n_symbols):
            cooccur[x, x] = before[x, x]
        return traces_with, cooccur, before


def levenshtein_many(query: np.ndarray, pool: np.ndarray, pool_lens: np.ndarray) -> np.ndarray:
    """Edit distances from ``query`` to every row of the padded ``pool``.

    ``query`` is a 1-d int32 code array; ``pool`` is (n, width) int32 padded
    with -1; ``pool_lens`` gives each row's true length.
    """
    if USE_NUMBA:
        return _levenshtein_many_nb(query, pool, pool_lens)
    return _levenshtein_many_np(query, pool, pool_lens)


def order_stats(tokens: np.ndarray, lengths: np.ndarray, freqs: np.ndarray, n_symbols: int):
    """Trace-weighted per-activity and per-pair occurrence counts.

    Returns ``(traces_with, cooccur, before)`` where ``traces_with[x]``
    counts traces containing symbol x, ``before[x, y]`` counts traces where
    some x occurrence precedes some y occurrence, and ``cooccur[x, y]``
    counts traces containing both.  The diagonal of ``cooccur`` counts
    traces where the symbol occurs at least twice, i.e. co-occurs with
    itself as two distinct events.
    """
    if USE_NUMBA:
        return _order_stats_nb(tokens, lengths, freqs, n_symbols)
    return _order_stats_np(tokens, lengths, freqs, n_symbols)


def encode_sequences(seqs, vocabulary: dict[str, int]) -> tuple[np.ndarray, np.ndarray]:
    """Pack string sequences into a -1-padded int32 matrix plus lengths.

    ``vocabulary`` is extended in place for unseen tokens.
    """
    width = max((len(s) for s in seqs), default=0)
    tokens = np.full((len(seqs), max(width, 1)), -1, dtype=np.int32)
    lengths = np.empty(len(seqs), dtype=np.int32)
    for row, seq in enumerate(seqs):
        lengths[row] = len(seq)
        for col, name in enumerate(seq):
            tokens[row, col] = vocabulary.setdefault(name, len(vocabulary))
    return tokens, lengths
