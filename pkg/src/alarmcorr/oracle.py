"""Brute-force reference implementations used to check the miner.

Nothing here shares code with the counting path in :mod:`alarmcorr.miner`:
occurrences are enumerated explicitly and the largest event-disjoint subset
is found by exhaustive search (small conflict components) or an integer
program (large ones).  Both are exact, and both are slow.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from collections import defaultdict

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix

from .alarms import AlarmQueue
from .errors import InstanceTooLarge
from .miner import FrequentSequence, FrequentSet, SupportThreshold, check_window

MAX_COUNT_EVENTS = 500
MAX_MINE_EVENTS = 300
MAX_MINE_TYPES = 8
MAX_MINE_LENGTH = 4
_SMALL_COMPONENT = 20


def _pools(queue: AlarmQueue) -> dict:
    pools = defaultdict(list)
    for tup in queue.tuples:
        for a in tup.alarm_types:
            pools[a].append(tup.timestamp)
    return pools


def _extend(seq, chains, x, pools, window):
    """Occurrences of ``seq + (x,)`` grown from the occurrences of ``seq``."""
    times = pools.get(x, ())
    out = []
    if not seq:
        return [(t,) for t in times]
    for chain in chains:
        lo = bisect_right(times, chain[-1])
        hi = bisect_right(times, chain[0] + window)
        out.extend(chain + (t,) for t in times[lo:hi])
    return out


def enumerate_occurrences(seq, queue: AlarmQueue, window: int) -> list[tuple]:
    """Every occurrence of ``seq`` as a tuple of timestamps."""
    pools = _pools(queue)
    chains = []
    for k in range(len(seq)):
        chains = _extend(seq[:k], chains, seq[k], pools, window)
        if not chains:
            break
    return chains


def _mis_small(adj: list[int]) -> int:
    # maximum independent set of a tiny conflict graph by branching on the
    # lowest vertex: leave it out, or take it and drop its neighbours
    memo = {}

    def go(mask):
        if not mask:
            return 0
        if mask in memo:
            return memo[mask]
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        best = go(rest)
        if 1 + bin(rest).count("1") > best:
            best = max(best, 1 + go(rest & ~adj[v]))
        memo[mask] = best
        return best

    return go((1 << len(adj)) - 1)


def _packing_ilp(occ_events: list[list[int]], n_events: int) -> int:
    rows, cols = [], []
    for j, evs in enumerate(occ_events):
        rows.extend(evs)
        cols.extend([j] * len(evs))
    a = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n_events, len(occ_events))).tocsr()
    n = len(occ_events)
    res = milp(
        c=-np.ones(n),
        constraints=LinearConstraint(a, -np.inf, 1),
        integrality=np.ones(n),
        bounds=Bounds(0, 1),
    )
    if not res.success:
        raise RuntimeError(f"packing ILP failed: {res.message}")
    return int(round(-res.fun))


def max_disjoint(occurrences: list) -> int:
    """Size of the largest subset of pairwise event-disjoint occurrences.

    ``occurrences`` is a list of collections of hashable event keys.
    """
    if not occurrences:
        return 0
    event_id = {}
    occ_events = []
    for occ in occurrences:
        occ_events.append([event_id.setdefault(e, len(event_id)) for e in occ])

    parent = list(range(len(occurrences)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    users = defaultdict(list)
    for j, evs in enumerate(occ_events):
        for e in evs:
            users[e].append(j)
    for js in users.values():
        for j in js[1:]:
            ra, rb = find(js[0]), find(j)
            if ra != rb:
                parent[rb] = ra

    comps = defaultdict(list)
    for j in range(len(occurrences)):
        comps[find(j)].append(j)

    total = 0
    for members in comps.values():
        if len(members) == 1:
            total += 1
            continue
        if len(members) <= _SMALL_COMPONENT:
            pos = {j: p for p, j in enumerate(members)}
            adj = [0] * len(members)
            for j in members:
                for e in occ_events[j]:
                    for other in users[e]:
                        if other != j:
                            adj[pos[j]] |= 1 << pos[other]
            total += _mis_small(adj)
        else:
            local = {}
            sub = [[local.setdefault(e, len(local)) for e in occ_events[j]] for j in members]
            total += _packing_ilp(sub, len(local))
    return total


def _keys(seq, chains):
    return [list(zip(seq, chain)) for chain in chains]


def oracle_count(seq, queue: AlarmQueue, window: int, *, max_events: int = MAX_COUNT_EVENTS) -> int:
    """Exact maximum number of event-disjoint windowed occurrences of ``seq``."""
    seq = tuple(seq)
    if not seq:
        raise ValueError("sequence must have length >= 1")
    window = check_window(window)
    if queue.n_events > max_events:
        raise InstanceTooLarge(f"{queue.n_events} events exceeds the oracle guard of {max_events}")
    chains = enumerate_occurrences(seq, queue, window)
    return max_disjoint(_keys(seq, chains))


def oracle_mine(
    queue: AlarmQueue,
    window: int,
    threshold: SupportThreshold,
    max_len: int = MAX_MINE_LENGTH,
    *,
    max_events: int = MAX_MINE_EVENTS,
    max_types: int = MAX_MINE_TYPES,
) -> FrequentSet:
    """All sequences up to ``max_len`` meeting ``threshold``, by enumeration.

    Every sequence over the present alphabet is visited (a sequence with no
    occurrence can only have extensions with no occurrence, so those
    subtrees are empty rather than pruned) and counted with the exact
    packing search.  No apriori pruning, no constraints.
    """
    window = check_window(window)
    if queue.n_events > max_events:
        raise InstanceTooLarge(f"{queue.n_events} events exceeds the oracle guard of {max_events}")
    alphabet = queue.alarm_types
    if len(alphabet) > max_types:
        raise InstanceTooLarge(f"{len(alphabet)} alarm types exceeds the oracle guard of {max_types}")
    if max_len > MAX_MINE_LENGTH:
        raise InstanceTooLarge(f"max_len {max_len} exceeds {MAX_MINE_LENGTH}")
    n = len(queue.tuples)
    result = FrequentSet(n_tuples=n, window=window, max_length=max_len)
    if n == 0:
        result.min_count = threshold.effective(0)
        return result
    need = threshold.effective(n)
    result.min_count = need
    pools = _pools(queue)
    found = defaultdict(list)

    def walk(prefix, chains):
        for x in alphabet:
            seq = prefix + (x,)
            ext = _extend(prefix, chains, x, pools, window)
            if not ext:
                continue
            # no packing can beat the scarcest type's events per use
            used = defaultdict(set)
            for chain in ext:
                for a, t in zip(seq, chain):
                    used[a].add(t)
            bound = min(len(ts) // seq.count(a) for a, ts in used.items())
            k = max_disjoint(_keys(seq, ext)) if bound >= need else 0
            if k >= need:
                found[len(seq)].append(FrequentSequence(seq, k, k / n))
            if len(seq) < max_len:
                walk(seq, ext)

    walk((), [])
    for m in sorted(found):
        result.by_length[m] = sorted(found[m])
    return result


def brute_force_count(seq, queue: AlarmQueue, window: int) -> int:
    """Tiny-instance cross-check for :func:`max_disjoint`: try every subset."""
    chains = enumerate_occurrences(tuple(seq), queue, window)
    if len(chains) > 16:
        raise InstanceTooLarge("brute force is limited to 16 occurrences")
    keys = [frozenset(zip(seq, c)) for c in chains]
    for size in range(len(keys), 0, -1):
        for combo in itertools.combinations(keys, size):
            if sum(len(k) for k in combo) == len(frozenset().union(*combo)):
                return size
    return 0
