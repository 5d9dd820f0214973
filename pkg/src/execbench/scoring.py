"""Feasibility and performance scoring of candidate process changes.

A change is applied to every own-log variant that executes one of the
replaced activities; each modified variant is aligned against the
benchmark variants that execute a replacement activity, and the
frequency-weighted edit similarity of those alignments is the change's
feasibility.  When both logs carry a performance measure, the same
alignments yield the expected per-case performance impact.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ._kernels import encode_sequences, levenshtein_many
from .compatibility import (
    DEFAULT_MAX_CHANGE_SIZE,
    ProcessChange,
    build_compatibility_graph,
    enumerate_changes,
)
from .errors import DataError, LogSimilarityWarning, VacuousChangeError
from .eventlog import (
    EventLog,
    PerfConfig,
    Variant,
    VariantIndex,
    extract_variants,
    trace_performance,
)
from .footprint import (
    DEFAULT_EXCLUSIVENESS_THRESHOLD,
    DEFAULT_INTERLEAVING_THRESHOLD,
    build_footprint_matrix,
)
from .matching import match_activities

SIMILARITY_WARNING_BOUND = 0.5


@dataclass(frozen=True)
class Alignment:
    """One affected own-log variant with its closest benchmark variant."""

    original: Variant
    modified: Variant
    matched: Variant
    similarity: float
    frequency: int
    tie_count: int
    own_performance: float | None = None
    benchmark_performance: float | None = None


@dataclass(frozen=True)
class ScoredChange:
    change: ProcessChange
    feasibility: float
    performance_impact: float | None
    affected_trace_count: int
    alignments: tuple[Alignment, ...]

    @property
    def closest_matches(self) -> dict[Variant, tuple[Variant, float]]:
        return {a.modified: (a.matched, a.similarity) for a in self.alignments}


@dataclass(frozen=True)
class BenchmarkConfig:
    exc_threshold: float = DEFAULT_EXCLUSIVENESS_THRESHOLD
    int_threshold: float = DEFAULT_INTERLEAVING_THRESHOLD
    max_change_size: int = DEFAULT_MAX_CHANGE_SIZE
    min_feasibility: float = 0.0
    top: int | None = None
    performance: PerfConfig | None = None


def affected_variants(index: VariantIndex, change: ProcessChange) -> set[Variant]:
    """Own-log variants executing at least one replaced activity."""
    own = change.own_activities
    return {v for v in index.entries if own.intersection(v)}


def apply_change(variant: Variant, change: ProcessChange) -> Variant:
    """Substitute every occurrence of each replaced activity, in place.

    Replacements within one change rewrite pairwise distinct activities,
    so the substitution is order-independent and length-preserving.
    """
    mapping = change.mapping()
    return tuple(mapping.get(a, a) for a in variant)


def edit_similarity(v: Sequence[str], w: Sequence[str]) -> float:
    """1 - Levenshtein(v, w) / max(|v|, |w|), over activity tokens."""
    if not v or not w:
        raise ValueError("edit similarity requires non-empty variants")
    vocabulary: dict[str, int] = {}
    tokens, lengths = encode_sequences([tuple(v), tuple(w)], vocabulary)
    distance = int(levenshtein_many(tokens[0, : lengths[0]], tokens[1:2], lengths[1:2].astype(np.int32))[0])
    return 1.0 - distance / max(len(v), len(w))


def closest_match(modified: Variant, candidates: Mapping[Variant, int]) -> tuple[Variant, float]:
    """The candidate with maximal edit similarity to ``modified``.

    Ties break toward the candidate with higher frequency, then the
    lexicographically smallest variant, so results are deterministic.
    """
    pool = _Pool.from_mapping(candidates)
    best, similarity, _ = _closest(modified, pool)
    return pool.variants[best], similarity


class _Pool:
    """Pre-encoded benchmark candidates for repeated alignment queries.

    Rows are grouped by variant length so that queries can skip whole
    groups: a candidate of length L cannot beat similarity
    ``1 - |L - m| / max(L, m)`` against a length-m query.
    """

    def __init__(
        self,
        variants: list[Variant],
        freqs: list[int],
        perfs: list[float | None],
        vocabulary: dict[str, int],
        encode_cache: dict[Variant, np.ndarray] | None = None,
    ):
        if not variants:
            raise DataError("no benchmark variant executes any replacement activity")
        self.variants = variants
        self.freqs = freqs
        self.perfs = perfs
        self.vocabulary = vocabulary
        self.encode_cache = encode_cache if encode_cache is not None else {}
        tokens, lengths = encode_sequences(variants, vocabulary)
        self.by_length: list[tuple[int, np.ndarray, np.ndarray, np.ndarray]] = []
        for length in sorted(set(int(x) for x in lengths)):
            indices = np.flatnonzero(lengths == length)
            self.by_length.append(
                (
                    length,
                    indices,
                    np.ascontiguousarray(tokens[indices]),
                    np.full(len(indices), length, dtype=np.int32),
                )
            )
        self.order_cache: dict[int, list[tuple[float, int, np.ndarray, np.ndarray, np.ndarray]]] = {}
        self.cache: dict[Variant, tuple[int, float, int]] = {}

    @classmethod
    def from_mapping(cls, candidates: Mapping[Variant, int]) -> "_Pool":
        ordered = sorted(candidates)
        return cls(ordered, [candidates[v] for v in ordered], [None] * len(ordered), {})

    def _encode(self, variant: Variant) -> np.ndarray:
        row = self.encode_cache.get(variant)
        if row is None:
            tokens, lengths = encode_sequences([variant], self.vocabulary)
            row = np.ascontiguousarray(tokens[0, : lengths[0]])
            self.encode_cache[variant] = row
        return row

    def _groups_for(self, m: int) -> list[tuple[float, int, np.ndarray, np.ndarray, np.ndarray]]:
        order = self.order_cache.get(m)
        if order is None:
            order = sorted(
                (
                    (1.0 - abs(length - m) / max(length, m), length, indices, tokens, lens)
                    for length, indices, tokens, lens in self.by_length
                ),
                key=lambda group: -group[0],
            )
            self.order_cache[m] = order
        return order


def _closest(modified: Variant, pool: _Pool) -> tuple[int, float, int]:
    """Index of the best candidate, its similarity, and the tie count.

    Length groups are visited in order of their similarity upper bound;
    groups that cannot reach the best similarity seen so far are skipped,
    groups that could merely tie it are still evaluated so the tie count
    stays exact.
    """
    cached = pool.cache.get(modified)
    if cached is not None:
        return cached
    query_row = pool._encode(modified)
    m = len(modified)
    best_sim = -1.0
    tied: list[int] = []
    for bound, length, indices, tokens, lens in pool._groups_for(m):
        if bound < best_sim:
            break
        distances = levenshtein_many(query_row, tokens, lens)
        similarities = 1.0 - distances / max(length, m)
        group_best = float(similarities.max())
        if group_best > best_sim:
            best_sim = group_best
            tied = []
        if group_best >= best_sim:
            tied.extend(int(indices[i]) for i in np.flatnonzero(similarities == best_sim))
    best = min(tied, key=lambda i: (-pool.freqs[i], pool.variants[i]))
    result = (best, best_sim, len(tied))
    pool.cache[modified] = result
    return result


class ChangeScorer:
    """Scores many changes against one pair of variant indexes.

    Candidate pools and alignment results are cached across changes; the
    outcome is independent of scoring order.
    """

    def __init__(self, own: VariantIndex, benchmark: VariantIndex, with_performance: bool = False):
        self.own = own
        self.benchmark = benchmark
        self.with_performance = with_performance
        self._vocabulary: dict[str, int] = {}
        self._encode_cache: dict[Variant, np.ndarray] = {}
        self._pools: dict[frozenset[str], _Pool] = {}

    def _pool(self, benchmark_activities: frozenset[str]) -> _Pool:
        pool = self._pools.get(benchmark_activities)
        if pool is None:
            selected = sorted(
                v for v in self.benchmark.entries if benchmark_activities.intersection(v)
            )
            pool = _Pool(
                selected,
                [self.benchmark.entries[v].frequency for v in selected],
                [self.benchmark.entries[v].mean_performance for v in selected],
                self._vocabulary,
                self._encode_cache,
            )
            self._pools[benchmark_activities] = pool
        return pool

    def score(self, change: ProcessChange) -> ScoredChange:
        affected = sorted(affected_variants(self.own, change))
        if not affected:
            raise VacuousChangeError(
                "no affected variants: none of the replaced activities occurs in the own log"
            )
        pool = self._pool(change.benchmark_activities)
        alignments = []
        weight_total = 0
        feasibility_sum = 0.0
        impact_sum = 0.0
        for original in affected:
            entry = self.own.entries[original]
            modified = apply_change(original, change)
            best, similarity, ties = _closest(modified, pool)
            matched = pool.variants[best]
            own_perf = entry.mean_performance
            bench_perf = pool.perfs[best]
            if self.with_performance:
                if own_perf is None or bench_perf is None:
                    raise DataError("performance measure required on both logs")
                impact_sum += entry.frequency * (bench_perf - own_perf)
            weight_total += entry.frequency
            feasibility_sum += entry.frequency * similarity
            alignments.append(
                Alignment(
                    original=original,
                    modified=modified,
                    matched=matched,
                    similarity=similarity,
                    frequency=entry.frequency,
                    tie_count=ties,
                    own_performance=own_perf,
                    benchmark_performance=bench_perf if self.with_performance else None,
                )
            )
        return ScoredChange(
            change=change,
            feasibility=feasibility_sum / weight_total,
            performance_impact=(impact_sum / weight_total) if self.with_performance else None,
            affected_trace_count=weight_total,
            alignments=tuple(alignments),
        )


def feasibility(change: ProcessChange, own: VariantIndex, benchmark: VariantIndex) -> float:
    """Frequency-weighted mean edit similarity of the change's alignments."""
    return ChangeScorer(own, benchmark).score(change).feasibility


def performance_impact(change: ProcessChange, own: VariantIndex, benchmark: VariantIndex) -> float:
    """Frequency-weighted mean benchmark-minus-own performance difference.

    Positive values mean the benchmark performs better under the
    higher-is-better normalization.
    """
    impact = ChangeScorer(own, benchmark, with_performance=True).score(change).performance_impact
    assert impact is not None
    return impact


def benchmark(log_own: EventLog, log_benchmark: EventLog, config: BenchmarkConfig | None = None) -> list[ScoredChange]:
    """Run the full pipeline and return the ranked list of scored changes.

    Footprints, matching, compatible grouping, then scoring; vacuous
    changes are dropped, the rest are filtered by minimum feasibility and
    sorted by performance impact (when available), feasibility, and
    canonical change order.
    """
    config = config or BenchmarkConfig()
    own_matrix = build_footprint_matrix(log_own, config.exc_threshold, config.int_threshold)
    bench_matrix = build_footprint_matrix(log_benchmark, config.exc_threshold, config.int_threshold)
    shared = log_own.alphabet & log_benchmark.alphabet
    union = log_own.alphabet | log_benchmark.alphabet
    if union and len(shared) / len(union) < SIMILARITY_WARNING_BOUND:
        warnings.warn(
            f"logs share only {len(shared)} of {len(union)} activities; matches may be unreliable",
            LogSimilarityWarning,
            stacklevel=2,
        )
    matches = match_activities(own_matrix, bench_matrix)
    changes = enumerate_changes(build_compatibility_graph(matches), config.max_change_size)

    with_performance = config.performance is not None
    own_values = trace_performance(log_own, config.performance) if with_performance else None
    bench_values = trace_performance(log_benchmark, config.performance) if with_performance else None
    own_index = extract_variants(log_own, own_values)
    bench_index = extract_variants(log_benchmark, bench_values)

    scorer = ChangeScorer(own_index, bench_index, with_performance)
    scored = []
    for change in changes:
        try:
            scored.append(scorer.score(change))
        except VacuousChangeError:
            continue
    scored = [s for s in scored if s.feasibility >= config.min_feasibility]
    if with_performance:
        scored.sort(key=lambda s: (-s.performance_impact, -s.feasibility, s.change.sort_key()))
    else:
        scored.sort(key=lambda s: (-s.feasibility, s.change.sort_key()))
    if config.top is not None:
        scored = scored[: config.top]
    return scored
