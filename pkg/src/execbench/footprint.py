"""Frequency-scored behavioral relations between the activities of one log.

Every ordered activity pair gets exactly one relation: strict order in
either direction, exclusiveness, or interleaving.  Relations are derived
from trace counts rather than trace existence so that a handful of noisy
traces cannot flip a relation; the exclusiveness and interleaving decisions
go through user-set thresholds that should sit close to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Sequence

import numpy as np

from ._kernels import encode_sequences, order_stats
from .errors import ConfigError, DataError, UndefinedScoreError, UnknownActivityError
from .eventlog import EventLog, VariantIndex, extract_variants

DEFAULT_EXCLUSIVENESS_THRESHOLD = 0.9
DEFAULT_INTERLEAVING_THRESHOLD = 0.9


class Relation(Enum):
    STRICT_ORDER = "->"
    REVERSE_ORDER = "<-"
    EXCLUSIVE = "#"
    INTERLEAVING = "||"

    @property
    def mirrored(self) -> "Relation":
        if self is Relation.STRICT_ORDER:
            return Relation.REVERSE_ORDER
        if self is Relation.REVERSE_ORDER:
            return Relation.STRICT_ORDER
        return self


@dataclass(frozen=True)
class CooccurrenceStats:
    """Trace counts backing the relation scores.

    ``cooccur`` holds, off the diagonal, the number of traces containing
    both activities; on the diagonal it counts traces where the activity
    occurs at least twice (the only way an activity co-occurs with itself
    as two distinct events).  ``before[a, b]`` counts traces where some
    occurrence of a precedes some occurrence of b; any occurrence counts.
    """

    activities: tuple[str, ...]
    n_traces: int
    traces_with: np.ndarray
    cooccur: np.ndarray
    before: np.ndarray

    def index(self, activity: str) -> int:
        try:
            return self.activities.index(activity)
        except ValueError:
            raise UnknownActivityError(f"unknown activity {activity!r}") from None

    def count_with(self, a: str) -> int:
        return int(self.traces_with[self.index(a)])

    def count_both(self, a: str, b: str) -> int:
        return int(self.cooccur[self.index(a), self.index(b)])

    def count_only(self, a: str, b: str) -> int:
        """Traces containing a but not b; zero for a pair of equal names."""
        ia, ib = self.index(a), self.index(b)
        if ia == ib:
            return 0
        return int(self.traces_with[ia] - self.cooccur[ia, ib])

    def count_before(self, a: str, b: str) -> int:
        return int(self.before[self.index(a), self.index(b)])


def ordering_counts(log: EventLog, variants: VariantIndex | None = None) -> CooccurrenceStats:
    """Tally the ordering patterns of all activity pairs, per trace.

    Counts are accumulated over distinct variants weighted by frequency,
    which is equivalent to enumerating traces directly.
    """
    variants = variants or extract_variants(log)
    activities = tuple(sorted(log.alphabet))
    vocabulary = {name: i for i, name in enumerate(activities)}
    seqs = list(variants.entries.keys())
    freqs = np.array([variants.entries[v].frequency for v in seqs], dtype=np.int64)
    tokens, lengths = encode_sequences(seqs, vocabulary)
    traces_with, cooccur, before = order_stats(tokens, lengths, freqs, len(activities))
    return CooccurrenceStats(
        activities=activities,
        n_traces=variants.total_traces,
        traces_with=traces_with,
        cooccur=cooccur,
        before=before,
    )


def exclusiveness_score(stats: CooccurrenceStats, a: str, b: str) -> float:
    """min(|T_a without b| / |T_a|, |T_b without a| / |T_b|)."""
    return min(
        stats.count_only(a, b) / stats.count_with(a),
        stats.count_only(b, a) / stats.count_with(b),
    )


def interleaving_score(stats: CooccurrenceStats, a: str, b: str) -> float:
    """1 - |#(a before b) - #(b before a)| / #(a and b co-occur)."""
    both = stats.count_both(a, b)
    if both == 0:
        raise UndefinedScoreError(
            f"activities {a!r} and {b!r} never co-occur; the interleaving score is undefined"
        )
    return 1.0 - abs(stats.count_before(a, b) - stats.count_before(b, a)) / both


def classify_relation(
    stats: CooccurrenceStats,
    a: str,
    b: str,
    exc_threshold: float = DEFAULT_EXCLUSIVENESS_THRESHOLD,
    int_threshold: float = DEFAULT_INTERLEAVING_THRESHOLD,
) -> Relation:
    """Pick the relation for one ordered pair.

    Pairs that never co-occur are exclusive outright, which also covers an
    activity against itself when it never repeats.  Otherwise the scores
    are checked against the thresholds (strictly greater), and remaining
    pairs are sequential in the majority direction; an exact tie in
    direction counts, reachable only at an interleaving threshold of 1,
    falls back to interleaving.
    """
    _check_threshold("exc", exc_threshold)
    _check_threshold("int", int_threshold)
    if stats.count_both(a, b) == 0:
        return Relation.EXCLUSIVE
    if exclusiveness_score(stats, a, b) > exc_threshold:
        return Relation.EXCLUSIVE
    if interleaving_score(stats, a, b) > int_threshold:
        return Relation.INTERLEAVING
    forward = stats.count_before(a, b)
    backward = stats.count_before(b, a)
    if forward > backward:
        return Relation.STRICT_ORDER
    if forward < backward:
        return Relation.REVERSE_ORDER
    return Relation.INTERLEAVING


def _check_threshold(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{name} threshold must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class FootprintMatrix:
    activities: tuple[str, ...]
    cells: np.ndarray  # int8 codes indexed like activities
    exc_threshold: float
    int_threshold: float

    _CODES = (Relation.EXCLUSIVE, Relation.STRICT_ORDER, Relation.REVERSE_ORDER, Relation.INTERLEAVING)

    def _index(self, activity: str) -> int:
        try:
            return self.activities.index(activity)
        except ValueError:
            raise UnknownActivityError(f"unknown activity {activity!r}") from None

    def relation(self, a: str, b: str) -> Relation:
        return self._CODES[self.cells[self._index(a), self._index(b)]]

    def row(self, activity: str, columns: Sequence[str] | Iterable[str]) -> tuple[Relation, ...]:
        i = self._index(activity)
        return tuple(self._CODES[self.cells[i, self._index(c)]] for c in columns)

    def to_csv(self, stream: IO[str]) -> None:
        import csv

        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow([""] + list(self.activities))
        for i, a in enumerate(self.activities):
            writer.writerow([a] + [self._CODES[self.cells[i, j]].value for j in range(len(self.activities))])


def build_footprint_matrix(
    log: EventLog,
    exc_threshold: float = DEFAULT_EXCLUSIVENESS_THRESHOLD,
    int_threshold: float = DEFAULT_INTERLEAVING_THRESHOLD,
    variants: VariantIndex | None = None,
) -> FootprintMatrix:
    """Classify every ordered pair of one log, including the diagonal.

    Each unordered pair is classified once and mirrored, so the symmetry
    guarantees (exclusive and interleaving cells are symmetric, strict
    order flips direction) hold by construction.
    """
    if not log.traces:
        raise DataError("cannot build a footprint matrix for an empty event log")
    stats = ordering_counts(log, variants)
    activities = stats.activities
    code_of = {rel: np.int8(i) for i, rel in enumerate(FootprintMatrix._CODES)}
    cells = np.zeros((len(activities), len(activities)), dtype=np.int8)
    for i, a in enumerate(activities):
        for j in range(i, len(activities)):
            rel = classify_relation(stats, a, activities[j], exc_threshold, int_threshold)
            cells[i, j] = code_of[rel]
            cells[j, i] = code_of[rel.mirrored]
    return FootprintMatrix(activities, cells, exc_threshold, int_threshold)
