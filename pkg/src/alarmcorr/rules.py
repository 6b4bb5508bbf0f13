"""Correlation rules from frequent sequences, and the summary metrics of a run.

A rule splits a frequent sequence ``whole`` into an antecedent and the
remaining consequent.  Its confidence is the deviation from independence::

    | P(whole) / P(antecedent) - P(consequent) |

with every ``P`` a support over the same queue and window.  It is a
magnitude, not a probability, and can exceed 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .alarms import AlarmQueue
from .errors import InconsistentInputs, NoSequencesAtLength, ZeroAntecedentSupport
from .miner import FrequentSet, _Counter, check_window


def _fmt_seq(seq) -> str:
    return "<" + ", ".join(str(a) for a in seq) + ">"


@dataclass(frozen=True)
class CorrelationRule:
    antecedent: tuple
    consequent: tuple
    whole: tuple
    confidence: float
    support: float
    interval: int
    whole_count: int
    antecedent_count: int
    consequent_count: int
    # the alternative ratio |P(whole)| / |P(antecedent) - P(consequent)|,
    # filled in diagnostics mode only (None when its denominator is 0)
    alt_confidence: float | None = None

    def __str__(self):
        return (
            f"{_fmt_seq(self.antecedent)} --{self.interval}s--> {_fmt_seq(self.consequent)} "
            f"[{self.confidence:.6g}, {self.support:.6g}, {self.interval}]"
        )

    def sort_key(self):
        return (-self.confidence, self.whole, self.antecedent, self.consequent)


def rule_confidence(p_whole: float, p_antecedent: float, p_consequent: float) -> float:
    for name, p in (("whole", p_whole), ("antecedent", p_antecedent), ("consequent", p_consequent)):
        if not 0 <= p <= 1:
            raise ValueError(f"support of {name} must be in [0, 1], got {p!r}")
    if p_antecedent == 0:
        raise ZeroAntecedentSupport("antecedent support is zero")
    return abs(p_whole / p_antecedent - p_consequent)


def alt_confidence(p_whole: float, p_antecedent: float, p_consequent: float) -> float | None:
    diff = abs(p_antecedent - p_consequent)
    return None if diff == 0 else abs(p_whole) / diff


def splits(whole: tuple, all_splits: bool = False):
    """``(antecedent, consequent)`` pairs of ``whole``.

    By default only proper prefixes, so the antecedent precedes the
    consequent in time.  ``all_splits`` takes every proper non-empty subset
    of positions as the antecedent, both parts keeping their order.
    """
    m = len(whole)
    if not all_splits:
        for j in range(1, m):
            yield whole[:j], whole[j:]
        return
    seen = set()
    for r in range(1, m):
        for pos in itertools.combinations(range(m), r):
            rest = [i for i in range(m) if i not in pos]
            pair = (tuple(whole[i] for i in pos), tuple(whole[i] for i in rest))
            if pair not in seen:
                seen.add(pair)
                yield pair


def generate_rules(
    frequent: FrequentSet,
    queue: AlarmQueue,
    window: int,
    min_conf: float,
    *,
    all_splits: bool = False,
    diagnostics: bool = False,
    workers: int = 1,
) -> list[CorrelationRule]:
    """Every rule from ``frequent`` whose confidence is at least ``min_conf``.

    Supports come from one queue: counts already in ``frequent`` are reused
    (they were taken on this queue and window, which is checked) and any
    missing part is counted directly.  Output is sorted by descending
    confidence, then canonically.
    """
    window = check_window(window)
    if min_conf < 0:
        raise ValueError("min_conf must be >= 0")
    n = len(queue.tuples)
    if frequent.n_tuples != n or frequent.window != window:
        raise InconsistentInputs(
            f"frequent set was mined with {frequent.n_tuples} tuples / window {frequent.window}, "
            f"queue has {n} tuples / window {window}"
        )
    present = set(queue.alarm_types)
    for e in frequent.entries():
        missing = [a for a in e.sequence if a not in present]
        if missing:
            raise InconsistentInputs(f"frequent sequence uses {missing[0]}, absent from the queue")

    known = frequent.counts()
    todo = []
    wholes = [e.sequence for e in frequent.entries() if len(e.sequence) >= 2]
    for whole in wholes:
        for ante, cons in splits(whole, all_splits):
            for part in (ante, cons):
                if part not in known:
                    known[part] = None
                    todo.append(part)
    if todo:
        todo.sort()
        counts = _Counter(queue, window).count_many(todo, 0, workers)
        known.update(zip(todo, counts))

    rules = []
    for whole in wholes:
        cw = known[whole]
        for ante, cons in splits(whole, all_splits):
            ca, cc = known[ante], known[cons]
            conf = rule_confidence(cw / n, ca / n, cc / n)
            if conf >= min_conf:
                rules.append(CorrelationRule(
                    antecedent=ante,
                    consequent=cons,
                    whole=whole,
                    confidence=conf,
                    support=cw / n,
                    interval=window,
                    whole_count=cw,
                    antecedent_count=ca,
                    consequent_count=cc,
                    alt_confidence=alt_confidence(cw / n, ca / n, cc / n) if diagnostics else None,
                ))
    rules.sort(key=CorrelationRule.sort_key)
    return rules


def average_occurrence_times(frequent: FrequentSet, m: int) -> float:
    """Mean occurrence count of the length-``m`` frequent sequences."""
    level = frequent.level(m)
    if not level:
        raise NoSequencesAtLength(f"no frequent sequences of length {m}")
    return sum(e.count for e in level) / len(level)
