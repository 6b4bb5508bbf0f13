import random

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from _instances import random_queue
from alarmcorr import _kernels
from alarmcorr.alarms import AlarmQueue, AlarmType
from alarmcorr.errors import ConstraintError, EmptyQueue, MixedLengths, UnknownElement
from alarmcorr.miner import (
    ConstraintConfig,
    SupportThreshold,
    count_occurrences,
    generate_candidates,
    mine,
    prune_candidates,
    satisfies_inter,
    satisfies_intra,
    satisfies_scope,
    support,
)
from alarmcorr.oracle import oracle_count
from alarmcorr.topology import ROOT, ElementId, build_tree

from conftest import A, B

MODEL = build_tree(3, 3, 3)
a, b, c, d = (AlarmType(30, i, 1) for i in (1, 2, 3, 4))


# -- counting examples -----------------------------------------------------------


def test_single_element_counts_tuples():
    q = AlarmQueue.from_events([(a, 1), (a, 5), (b, 5), (a, 90)])
    assert count_occurrences((a,), q, 1) == 3


def test_abab(abab):
    assert count_occurrences((A, B), abab, 2) == 2
    assert count_occurrences((B, A), abab, 2) == 1
    assert support((A, B), abab, 2) == 0.5


def test_window_excludes():
    q = AlarmQueue.from_events([(a, 1), (b, 100)])
    assert count_occurrences((a, b), q, 2) == 0


def test_same_tuple_never_ordered():
    q = AlarmQueue.from_events([(a, 5), (b, 5)])
    assert count_occurrences((a, b), q, 50) == 0


def test_support_edges():
    q = AlarmQueue.from_events([(a, 1), (a, 2)])
    assert support((a,), q, 3) == 1.0
    assert support((b,), q, 3) == 0.0
    with pytest.raises(EmptyQueue):
        support((a,), AlarmQueue(), 3)
    assert count_occurrences((a,), AlarmQueue(), 3) == 0


def test_bad_window():
    with pytest.raises(ValueError):
        count_occurrences((a,), AlarmQueue.from_events([(a, 1)]), 0)


def test_greedy_falls_short_on_repeated_types():
    # a@3 b@5 a@6 a@8 b@8 a@10, width 5: greedy takes (3,5,6) and is stuck,
    # while (3,5,8) and (6,8,10) are disjoint
    q = AlarmQueue.from_events([(a, 3), (b, 5), (a, 6), (a, 8), (b, 8), (a, 10)])
    ix = q.index
    seq = np.array([ix.ids[a], ix.ids[b], ix.ids[a]])
    assert _kernels.greedy_count(seq, ix.offsets, ix.times, 5, 0, np.empty(0, np.int64)) == 1
    assert oracle_count((a, b, a), q, 5) == 2
    assert count_occurrences((a, b, a), q, 5) == 2


def test_constant_sequence():
    q = AlarmQueue.from_events([(a, t) for t in (0, 1, 2, 3, 10, 11, 30)])
    assert count_occurrences((a, a), q, 1) == 3
    assert count_occurrences((a, a, a), q, 3) == 1
    assert count_occurrences((a, a, a), q, 3) == oracle_count((a, a, a), q, 3)


# -- thresholds and constraints ------------------------------------------------


def test_threshold_effective():
    assert SupportThreshold.count(3).effective(100) == 3
    assert SupportThreshold.fraction(0.3).effective(10) == 3
    assert SupportThreshold.fraction(0.001).effective(10) == 1
    assert SupportThreshold.parse("20").kind == "count"
    assert SupportThreshold.parse("0.25").effective(7) == 2
    for bad in ("0", "-1", "1.5", "abc"):
        with pytest.raises(ConstraintError):
            SupportThreshold.parse(bad)


def test_class_predicates():
    bts1, bts9, bsc2, msc1 = AlarmType(30, 1, 7), AlarmType(30, 9, 3), AlarmType(20, 2, 3), AlarmType(10, 1, 2)
    assert satisfies_intra((bts1, bts9)) and not satisfies_inter((bts1, bts9))
    assert not satisfies_intra((bts1, bsc2))
    assert satisfies_inter((msc1, bsc2))
    assert satisfies_intra((bts1,)) and not satisfies_inter((bts1,))


def test_scope_predicate():
    m = build_tree(2, 1, 1)
    inside = (AlarmType(30, 1, 0), AlarmType(20, 1, 0), AlarmType(10, 1, 5))
    outside = (AlarmType(30, 1, 0), AlarmType(30, 2, 0))
    assert satisfies_scope(inside, m, ElementId(10, 1))
    assert satisfies_scope(outside, m, ROOT)
    assert not satisfies_scope(outside, m, ElementId(10, 1))
    assert satisfies_scope(outside, m, ElementId(20, 1), "class")
    with pytest.raises(UnknownElement):
        satisfies_scope(inside, m, ElementId(10, 7))


def test_config_validation():
    with pytest.raises(ConstraintError):
        ConstraintConfig("sideways")
    with pytest.raises(UnknownElement):
        ConstraintConfig(scope=(10, 9)).validate(MODEL)


# -- candidates ------------------------------------------------------------------


def test_join():
    assert (a, b, c) in generate_candidates([(a, b), (b, c)])
    assert generate_candidates([(a, b), (c, d)]) == []
    assert generate_candidates([(a,), (b,)]) == [(a, a), (a, b), (b, a), (b, b)]
    assert (a, a, a) in generate_candidates([(a, a)])
    with pytest.raises(MixedLengths):
        generate_candidates([(a,), (a, b)])


def test_prune():
    assert prune_candidates([(a, b, c)], [(a, b), (b, c), (a, c)]) == [(a, b, c)]
    assert prune_candidates([(a, b, c)], [(a, b), (b, c)]) == []
    assert prune_candidates([(a, a)], [(a,)]) == [(a, a)]


# -- mining examples -----------------------------------------------------------


def test_mine_example(abab):
    model = build_tree(1, 1, 1)
    q = AlarmQueue.from_events([(AlarmType(30, 1, 7), t) if t % 2 else (AlarmType(20, 1, 3), t) for t in (1, 2, 3, 4)])
    fs = mine(q, model, 2, SupportThreshold.count(2))
    x, y = AlarmType(30, 1, 7), AlarmType(20, 1, 3)
    assert fs.counts() == {(y,): 2, (x,): 2, (x, y): 2}
    assert fs.count_of((y, x)) is None
    assert len(mine(q, model, 2, SupportThreshold.count(5))) == 0


def test_intra_output_reports_same_class_pairs():
    rng = random.Random(3)
    q, w = random_queue(rng, 150, 6, window=20)
    cons = ConstraintConfig("intra", application="output")
    fs = mine(q, MODEL, w, SupportThreshold.count(2), cons)
    assert fs.level(2)
    assert all(satisfies_intra(s) for s in fs.sequences(2))


def test_empty_queue():
    with pytest.raises(EmptyQueue):
        mine(AlarmQueue(), MODEL, 5, SupportThreshold.count(1))


def test_canonical_order_and_soundness():
    rng = random.Random(8)
    q, w = random_queue(rng, 200, 6, window=15)
    fs = mine(q, MODEL, w, SupportThreshold.count(2), max_length=3)
    for m in fs.lengths():
        seqs = fs.sequences(m)
        assert seqs == sorted(set(seqs))
    for e in fs.entries():
        assert count_occurrences(e.sequence, q, w) == e.count >= fs.min_count
        assert e.support == e.count / len(q)


# -- properties --------------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)
slow = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@slow
@given(seeds, st.integers(1, 4))
def test_count_matches_oracle(seed, m):
    rng = random.Random(seed)
    q, w = random_queue(rng, 60, 4)
    seq = tuple(rng.choice(q.alarm_types) for _ in range(m))
    assert count_occurrences(seq, q, w) == oracle_count(seq, q, w)


@slow
@given(seeds, st.integers(2, 4))
def test_drop_one_never_increases(seed, m):
    rng = random.Random(seed)
    q, w = random_queue(rng, 120, 4)
    seq = tuple(rng.choice(q.alarm_types) for _ in range(m))
    k = count_occurrences(seq, q, w)
    for i in range(m):
        assert count_occurrences(seq[:i] + seq[i + 1 :], q, w) >= k


@slow
@given(seeds, st.integers(1, 4), st.integers(1, 20))
def test_wider_window_never_decreases(seed, m, extra):
    rng = random.Random(seed)
    q, w = random_queue(rng, 120, 4)
    seq = tuple(rng.choice(q.alarm_types) for _ in range(m))
    assert count_occurrences(seq, q, w + extra) >= count_occurrences(seq, q, w)


@slow
@given(seeds)
def test_scope_monotone(seed):
    rng = random.Random(seed)
    model = build_tree(2, 2, 2)
    types = [AlarmType(e.object_class, e.object_instance, 0) for e in sorted(model.elements) if e != ROOT]
    types = rng.sample(types, min(len(types), 6))
    q = AlarmQueue.from_events([(rng.choice(types), rng.randrange(300)) for _ in range(120)])
    th = SupportThreshold.count(2)
    bts = rng.choice([t.element for t in types if t.object_class == 30] or [ElementId(30, 1)])
    chain = [bts, *__import__("alarmcorr.topology", fromlist=["ancestors"]).ancestors(model, bts)]
    found = [set(mine(q, model, 20, th, ConstraintConfig(scope=e), max_length=3).sequences()) for e in chain]
    for inner, outer in zip(found, found[1:]):
        assert inner <= outer
    assert found[-1] == set(mine(q, model, 20, th, max_length=3).sequences())


@slow
@given(seeds)
def test_partition_and_output_completeness(seed):
    rng = random.Random(seed)
    q, w = random_queue(rng, 150, 6)
    th = SupportThreshold.count(rng.randint(1, 4))
    none = mine(q, MODEL, w, th, max_length=4)
    inter = mine(q, MODEL, w, th, ConstraintConfig("inter", application="output"), max_length=4)
    intra = mine(q, MODEL, w, th, ConstraintConfig("intra", application="output"), max_length=4)
    for m in range(2, 5):
        s_none, s_inter, s_intra = (set(f.sequences(m)) for f in (none, inter, intra))
        assert s_inter.isdisjoint(s_intra)
        assert s_inter | s_intra == s_none
    # generation mode never reports more than output mode
    gen = mine(q, MODEL, w, th, ConstraintConfig("inter"), max_length=4)
    assert set(gen.sequences()) <= set(inter.sequences())


def test_workers_do_not_change_results():
    rng = random.Random(21)
    q, w = random_queue(rng, 300, 8, window=25)
    th = SupportThreshold.count(2)
    ref = mine(q, MODEL, w, th, max_length=4)
    for k in (2, 3, 5):
        assert mine(q, MODEL, w, th, max_length=4, workers=k) == ref
