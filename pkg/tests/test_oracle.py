import random

import pytest

from _instances import random_queue, random_types
from alarmcorr.alarms import AlarmQueue
from alarmcorr.errors import InstanceTooLarge
from alarmcorr.miner import SupportThreshold
from alarmcorr.oracle import brute_force_count, enumerate_occurrences, max_disjoint, oracle_count, oracle_mine

from conftest import A, B


def test_abab_count(abab):
    assert oracle_count((A, B), abab, 2) == 2
    assert enumerate_occurrences((A, B), abab, 2) == [(1, 2), (3, 4)]


def test_single_type_is_tuple_count():
    q = AlarmQueue.from_events([(A, 1), (A, 2), (B, 2), (A, 7)])
    assert oracle_count((A,), q, 1) == 3


def test_narrow_window_no_pairs():
    q = AlarmQueue.from_events([(A, 0), (B, 2), (A, 4), (B, 6)])
    assert oracle_count((A, B), q, 1) == 0


def test_mine_abab(abab):
    fs = oracle_mine(abab, 2, SupportThreshold.count(2), 2)
    assert fs.counts() == {(A,): 2, (B,): 2, (A, B): 2}


def test_mine_empty():
    assert len(oracle_mine(AlarmQueue(), 3, SupportThreshold.count(1))) == 0


def test_guards():
    types = random_types(random.Random(0), 9)
    q = AlarmQueue.from_events([(a, i) for i, a in enumerate(types)])
    with pytest.raises(InstanceTooLarge):
        oracle_mine(q, 3, SupportThreshold.count(1))
    big = AlarmQueue.from_events([(A, i) for i in range(501)])
    with pytest.raises(InstanceTooLarge):
        oracle_count((A,), big, 3)
    assert oracle_count((A,), big, 3, max_events=600) == 501


def test_max_disjoint_small_cases():
    assert max_disjoint([]) == 0
    assert max_disjoint([[1, 2], [2, 3], [3, 4]]) == 2
    assert max_disjoint([[1, 2], [1, 3], [1, 4]]) == 1


@pytest.mark.parametrize("seed", range(150))
def test_packing_matches_subset_search(seed):
    rng = random.Random(seed)
    q, w = random_queue(rng, 12, 3, window=rng.randint(1, 6))
    seq = tuple(rng.choice(q.alarm_types) for _ in range(rng.randint(1, 3)))
    if len(enumerate_occurrences(seq, q, w)) > 16:
        pytest.skip("too many occurrences for subset search")
    assert oracle_count(seq, q, w) == brute_force_count(seq, q, w)


@pytest.mark.parametrize("seed", range(40))
def test_oracle_antimonotone(seed):
    rng = random.Random(1000 + seed)
    q, w = random_queue(rng, 80, 4)
    seq = tuple(rng.choice(q.alarm_types) for _ in range(3))
    k = oracle_count(seq, q, w)
    for i in range(3):
        assert oracle_count(seq[:i] + seq[i + 1 :], q, w) >= k
