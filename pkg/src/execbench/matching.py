"""Cross-log activity matching on footprint rows over the shared alphabet.

An own-log activity can plausibly be replaced by a benchmark activity when
the two have identical relations to every activity both logs share.
Relations to activities present in only one log are undefined across logs
and therefore ignored; shared self-columns participate like any other
column.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError
from .footprint import FootprintMatrix


@dataclass(frozen=True, order=True, slots=True)
class Match:
    own: str
    benchmark: str


@dataclass(frozen=True)
class MatchSet:
    matches: tuple[Match, ...]
    shared_alphabet: frozenset[str]

    def __len__(self) -> int:
        return len(self.matches)

    def pairs(self) -> set[tuple[str, str]]:
        return {(m.own, m.benchmark) for m in self.matches}


def match_activities(
    own: FootprintMatrix,
    benchmark: FootprintMatrix,
    keep_trivial: bool = False,
) -> MatchSet:
    """All (own activity, benchmark activity) pairs with equal partial footprints.

    Same-name pairs are trivial replacements and removed unless
    ``keep_trivial`` is set (useful for self-matching diagnostics).
    """
    shared = sorted(set(own.activities) & set(benchmark.activities))
    if not shared:
        raise DataError("logs share no activities; benchmarking is not meaningful")
    benchmark_rows = {b: benchmark.row(b, shared) for b in benchmark.activities}
    matches = []
    for a in own.activities:
        row = own.row(a, shared)
        for b in benchmark.activities:
            if a == b and not keep_trivial:
                continue
            if row == benchmark_rows[b]:
                matches.append(Match(a, b))
    return MatchSet(tuple(sorted(matches)), frozenset(shared))
