"""Level-wise discovery of frequent alarm-type sequences under model constraints.

An *occurrence* of a sequence maps its elements, in order, onto events at
strictly increasing timestamps whose first-to-last span is at most the
window width.  The count of a sequence is the largest number of occurrences
that share no event.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .alarms import AlarmQueue, AlarmType
from .errors import ConstraintError, EmptyQueue, MixedLengths, UnknownElement
from .topology import ROOT, ConfigModel, ElementId, in_scope

AlarmSequence = tuple  # tuple[AlarmType, ...]


class ConstraintMode(str, enum.Enum):
    NONE = "none"
    INTER = "inter"
    INTRA = "intra"


class Application(str, enum.Enum):
    GENERATION = "generation"
    OUTPUT = "output"


class ScopeMode(str, enum.Enum):
    SUBTREE = "subtree"
    CLASS = "class"


def check_window(window) -> int:
    if isinstance(window, bool) or not isinstance(window, (int, np.integer)) or window < 1:
        raise ValueError(f"window width must be a positive integer, got {window!r}")
    return int(window)


@dataclass(frozen=True)
class SupportThreshold:
    """Minimum support as a raw occurrence count or a fraction of the tuples."""

    value: int | float
    kind: str = "count"

    def __post_init__(self):
        if self.kind == "count":
            if isinstance(self.value, bool) or int(self.value) != self.value or self.value < 1:
                raise ConstraintError(f"count threshold must be an integer >= 1, got {self.value!r}")
        elif self.kind == "fraction":
            if not (0 < self.value <= 1):
                raise ConstraintError(f"fraction threshold must be in (0, 1], got {self.value!r}")
        else:
            raise ConstraintError(f"unknown threshold kind {self.kind!r}")

    @classmethod
    def count(cls, n: int) -> "SupportThreshold":
        return cls(int(n), "count")

    @classmethod
    def fraction(cls, f: float) -> "SupportThreshold":
        return cls(float(f), "fraction")

    @classmethod
    def parse(cls, text: str) -> "SupportThreshold":
        """``"20"`` is a count, ``"0.05"`` a fraction."""
        text = text.strip()
        if text.isdigit():
            return cls.count(int(text))
        try:
            value = float(text)
        except ValueError:
            raise ConstraintError(f"bad minimum support {text!r}") from None
        return cls.fraction(value)

    def effective(self, n_tuples: int) -> int:
        if self.kind == "count":
            return int(self.value)
        # Fraction(str(...)) keeps 0.3 * 10 from rounding up to 4
        return max(1, math.ceil(Fraction(str(self.value)) * n_tuples))

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class ConstraintConfig:
    mode: ConstraintMode = ConstraintMode.NONE
    scope: ElementId | None = None
    application: Application = Application.GENERATION
    scope_mode: ScopeMode = ScopeMode.SUBTREE

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", ConstraintMode(self.mode))
            object.__setattr__(self, "application", Application(self.application))
            object.__setattr__(self, "scope_mode", ScopeMode(self.scope_mode))
        except ValueError as exc:
            raise ConstraintError(str(exc)) from None
        if self.scope is not None:
            object.__setattr__(self, "scope", ElementId(*self.scope))

    def validate(self, model: ConfigModel) -> None:
        if self.scope is not None and self.scope not in model:
            raise UnknownElement(f"scope element {tuple(self.scope)} not in topology")

    def class_ok(self, seq: AlarmSequence) -> bool:
        """Inter/intra check.  Length-1 sequences are seeds and always pass."""
        if self.mode is ConstraintMode.NONE or len(seq) < 2:
            return True
        if self.mode is ConstraintMode.INTRA:
            return satisfies_intra(seq)
        return satisfies_inter(seq)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "scope": None if self.scope is None else list(self.scope),
            "scope_mode": self.scope_mode.value,
            "application": self.application.value,
        }


class FrequentSequence(NamedTuple):
    sequence: AlarmSequence
    count: int
    support: float


@dataclass
class FrequentSet:
    """Frequent sequences per length, each level in canonical order."""

    by_length: dict = field(default_factory=dict)
    n_tuples: int = 0
    window: int = 1
    min_count: int = 1
    constraints: ConstraintConfig = field(default_factory=ConstraintConfig)
    max_length: int | None = None

    def lengths(self) -> list[int]:
        return sorted(m for m, level in self.by_length.items() if level)

    def level(self, m: int) -> list[FrequentSequence]:
        return self.by_length.get(m, [])

    def sequences(self, m: int | None = None) -> list[AlarmSequence]:
        levels = [m] if m is not None else self.lengths()
        return [e.sequence for k in levels for e in self.level(k)]

    def entries(self):
        for m in self.lengths():
            yield from self.by_length[m]

    def counts(self) -> dict:
        return {e.sequence: e.count for e in self.entries()}

    def count_of(self, seq: AlarmSequence) -> int | None:
        for e in self.level(len(seq)):
            if e.sequence == seq:
                return e.count
        return None

    def __contains__(self, seq) -> bool:
        return self.count_of(tuple(seq)) is not None

    def __len__(self) -> int:
        return sum(len(v) for v in self.by_length.values())

    def total(self, min_length: int = 1) -> int:
        return sum(len(v) for m, v in self.by_length.items() if m >= min_length)


# -- constraint predicates ---------------------------------------------------


def satisfies_intra(seq: AlarmSequence) -> bool:
    """All elements raised on the same class of network element."""
    if not seq:
        raise ValueError("empty sequence")
    first = seq[0].object_class
    return all(a.object_class == first for a in seq)


def satisfies_inter(seq: AlarmSequence) -> bool:
    """At least two elements raised on different element classes."""
    if not seq:
        raise ValueError("empty sequence")
    return len({a.object_class for a in seq}) > 1


def satisfies_scope(
    seq: AlarmSequence,
    model: ConfigModel,
    scope_root: ElementId,
    mode: ScopeMode | str = ScopeMode.SUBTREE,
) -> bool:
    if scope_root not in model:
        raise UnknownElement(f"scope element {tuple(scope_root)} not in topology")
    if ScopeMode(mode) is ScopeMode.CLASS:
        return all(a.object_class >= scope_root.object_class for a in seq)
    return all(in_scope(model, scope_root, a.element) for a in seq)


# -- candidates ----------------------------------------------------------------


def generate_candidates(frequent_m: Sequence[AlarmSequence]) -> list[AlarmSequence]:
    """Join sequences whose (m-1)-suffix equals another's (m-1)-prefix.

    A sequence may join with itself when the overlap allows it, which only
    happens for constant sequences such as ``<a, a>``; without that, ``<a>``
    could not reach ``<a, a>`` nor ``<a, a>`` reach ``<a, a, a>``.
    """
    frequent_m = [tuple(s) for s in frequent_m]
    if not frequent_m:
        return []
    m = len(frequent_m[0])
    if m < 1 or any(len(s) != m for s in frequent_m):
        raise MixedLengths("all input sequences must share one length >= 1")
    by_prefix = defaultdict(list)
    for beta in frequent_m:
        by_prefix[beta[:-1]].append(beta[-1])
    out = set()
    for alpha in frequent_m:
        for tail in by_prefix.get(alpha[1:], ()):
            out.add(alpha + (tail,))
    return sorted(out)


def prune_candidates(candidates: Iterable[AlarmSequence], frequent_m: Iterable[AlarmSequence]) -> list[AlarmSequence]:
    """Keep candidates whose every drop-one subsequence is frequent."""
    known = {tuple(s) for s in frequent_m}
    kept = []
    for gamma in candidates:
        gamma = tuple(gamma)
        if all(gamma[:i] + gamma[i + 1 :] in known for i in range(len(gamma))):
            kept.append(gamma)
    return kept


# -- counting ------------------------------------------------------------------


def _exact_segment(seg, seq, stages_for, window) -> int:
    """Exhaustive DP over one gap-separated stretch of events.

    State: the sorted live partial occurrences as (stage, start) pairs.  An
    event that extends stage ``k`` only ever extends the earliest-started
    partial at that stage: swapping the tails of two partials elementwise
    (earlier events to the earlier start) keeps both within their windows,
    so some optimum has that shape.  Each event therefore either stays
    unused, starts a partial, or advances the oldest partial of one stage.
    """
    m = len(seq)
    n = len(seg)
    memo = {}
    seg_times = [t for t, _ in seg]
    # later[x][i]: events of type x in tuples i.. of the segment
    later = {}
    for x in stages_for:
        acc = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            acc[i] = acc[i + 1] + (x in seg[i][1])
        later[x] = acc
    # need[k][x]: events of type x a partial at stage k still has to find
    need = [{x: sum(1 for j in range(k, m) if seq[j] == x) for x in stages_for} for k in range(m)]

    def feasible(i, state):
        # Hall check per type: the partials due by each deadline cannot
        # need more events of a type than the segment still holds by then.
        # A partial that cannot finish only wastes events, and the path
        # that never started it is explored as well.
        if not state:
            return True
        by_deadline = sorted(state, key=lambda p: p[1])
        for x, acc in later.items():
            demand = 0
            for k, start in by_deadline:
                demand += need[k][x]
                if demand and demand > acc[i] - acc[bisect_right(seg_times, start + window)]:
                    return False
        return True

    def solve(i, state):
        if i == n:
            return 0
        t, kinds = seg[i]
        lo = t - window
        state = tuple(p for p in state if p[1] >= lo)
        key = (i, state)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if not feasible(i, state):
            memo[key] = -n
            return -n
        oldest = {}
        for pos, p in enumerate(state):
            oldest.setdefault(p[0], pos)
        best = 0

        # each stage is advanced at most once per tuple: a stage needs one
        # specific type and a tuple holds each type once
        def assign(j, taken, done, new):
            nonlocal best
            if j == len(kinds):
                rest = [p for pos, p in enumerate(state) if pos not in taken]
                value = done + solve(i + 1, tuple(sorted(rest + new)))
                if value > best:
                    best = value
                return
            x = kinds[j]
            assign(j + 1, taken, done, new)
            for k in stages_for[x]:
                if k == 0:
                    assign(j + 1, taken, done, new + [(1, t)])
                    continue
                pos = oldest.get(k)
                if pos is None:
                    continue
                if k + 1 == m:
                    assign(j + 1, taken | {pos}, done + 1, new)
                else:
                    assign(j + 1, taken | {pos}, done, new + [(k + 1, state[pos][1])])

        assign(0, frozenset(), 0, [])
        memo[key] = best
        return best

    return solve(0, ())


def exact_count(seq: Sequence, pools: dict, window: int, need: int = 0, greedy_ends=None) -> int:
    """Maximum disjoint occurrences for sequences with a repeated type.

    ``pools`` maps each type of ``seq`` to its sorted timestamps.  Events more
    than ``window`` apart can never share an occurrence, so the timeline is
    split at such gaps and each piece solved independently.

    ``greedy_ends`` are the end times of some disjoint packing (the greedy
    one, say).  A segment where that packing already meets the event bound
    needs no search.  When the total bound is below ``need`` it is returned
    as is, so the result is exact only when it is >= ``need``.
    """
    m = len(seq)
    kinds = sorted(set(seq))
    mult = {x: seq.count(x) for x in kinds}
    stages_for = {x: tuple(k for k in range(m) if seq[k] == x) for x in kinds}
    at = defaultdict(list)
    for x in kinds:
        for t in pools[x]:
            at[int(t)].append(x)
    times = sorted(at)
    ends = np.asarray(greedy_ends if greedy_ends is not None else [], dtype=np.int64)
    segments = []
    start = 0
    for i in range(1, len(times) + 1):
        if i < len(times) and times[i] - times[i - 1] <= window:
            continue
        seg = [(t, at[t]) for t in times[start:i]]
        start = i
        per_kind = defaultdict(int)
        for _, ks in seg:
            for x in ks:
                per_kind[x] += 1
        bound = min(per_kind[x] // mult[x] for x in kinds)
        if bound:
            have = int(np.searchsorted(ends, seg[-1][0], side="right") - np.searchsorted(ends, seg[0][0]))
            segments.append((bound, have, seg))
    upper = sum(b for b, _, _ in segments)
    if upper < need:
        return upper
    return sum(
        have if have == bound else _exact_segment(seg, seq, stages_for, window)
        for bound, have, seg in segments
    )


class _Counter:
    def __init__(self, queue: AlarmQueue, window: int):
        self.index = queue.index
        self.window = window

    def ids(self, seq):
        ids = self.index.ids
        try:
            return [ids[a] for a in seq]
        except KeyError:
            return None

    def count(self, seq, need=0) -> int:
        ids = self.ids(seq)
        if ids is None:
            return 0
        if len(seq) == 1:
            k = ids[0]
            return int(self.index.offsets[k + 1] - self.index.offsets[k])
        distinct = len(set(ids))
        idx = self.index
        exact = len(seq) <= 2 or distinct == len(ids) or distinct == 1
        last = ids[-1]
        ends = np.empty(0 if exact else int(idx.offsets[last + 1] - idx.offsets[last]), np.int64)
        greedy = int(_kernels.greedy_count(
            np.asarray(ids, dtype=np.int64), idx.offsets, idx.times, self.window, need if exact else 0, ends
        ))
        if exact:
            return greedy
        pools = {k: idx.times[idx.offsets[k] : idx.offsets[k + 1]] for k in set(ids)}
        return exact_count(ids, pools, self.window, need, ends[:greedy])

    def count_many(self, seqs, need=0, workers=1) -> list[int]:
        if workers <= 1 or len(seqs) < 2 * workers:
            return [self.count(s, need) for s in seqs]
        size = max(1, math.ceil(len(seqs) / (workers * 4)))
        chunks = [seqs[i : i + size] for i in range(0, len(seqs), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda chunk: [self.count(s, need) for s in chunk], chunks)
        return [c for part in parts for c in part]


def count_occurrences(seq: AlarmSequence, queue: AlarmQueue, window: int) -> int:
    seq = tuple(seq)
    if not seq:
        raise ValueError("sequence must have length >= 1")
    window = check_window(window)
    if not queue.tuples:
        return 0
    return _Counter(queue, window).count(seq)


def support(seq: AlarmSequence, queue: AlarmQueue, window: int) -> float:
    if not queue.tuples:
        raise EmptyQueue("support is undefined on an empty queue")
    return count_occurrences(seq, queue, window) / len(queue.tuples)


# -- main loop -----------------------------------------------------------------


def mine(
    queue: AlarmQueue,
    model: ConfigModel,
    window: int,
    threshold: SupportThreshold,
    constraints: ConstraintConfig | None = None,
    *,
    max_length: int | None = None,
    workers: int = 1,
    progress=None,
) -> FrequentSet:
    """Level-wise search for frequent sequences.

    Under ``application="generation"`` the inter/intra filter decides which
    sequences seed the next level, as a level-wise constrained search does;
    since the inter predicate is not anti-monotone this may lose sequences.
    Under ``"output"`` every frequent sequence seeds the next level and the
    filter is applied to the report only, which keeps the result complete.
    ``progress`` is called with ``(m, n_candidates, n_frequent)`` per level.
    """
    if not queue.tuples:
        raise EmptyQueue("cannot mine an empty alarm queue")
    window = check_window(window)
    constraints = constraints or ConstraintConfig()
    constraints.validate(model)
    if max_length is not None and max_length < 1:
        raise ValueError("max_length must be >= 1")
    workers = max(1, int(workers))

    n = len(queue.tuples)
    need = threshold.effective(n)
    counter = _Counter(queue, window)
    generation = constraints.application is Application.GENERATION

    candidates = list(queue.alarm_types)
    if constraints.scope is not None and constraints.scope != ROOT:
        candidates = [
            a for a in candidates
            if satisfies_scope((a,), model, constraints.scope, constraints.scope_mode)
        ]
    candidates = [(a,) for a in candidates]

    result = FrequentSet(n_tuples=n, window=window, min_count=need,
                         constraints=constraints, max_length=max_length)
    m = 1
    while candidates and (max_length is None or m <= max_length):
        if generation and m >= 2 and constraints.mode is not ConstraintMode.NONE:
            # same set as filtering after counting, minus the wasted counts
            candidates = [c for c in candidates if constraints.class_ok(c)]
        counts = counter.count_many(candidates, need, workers)
        frequent = [(c, k) for c, k in zip(candidates, counts) if k >= need]
        reported = [
            FrequentSequence(c, k, k / n) for c, k in frequent if constraints.class_ok(c)
        ]
        if reported:
            result.by_length[m] = reported
        if progress is not None:
            progress(m, len(candidates), len(reported))
        seeds = [c for c, _ in frequent]
        if max_length is not None and m >= max_length:
            break
        candidates = prune_candidates(generate_candidates(seeds), seeds)
        m += 1
    return result
