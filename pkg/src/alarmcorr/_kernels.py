"""Compiled inner loop of the windowed occurrence counter.

Set ``NUMBA_DISABLE_JIT=1`` to run it as plain Python.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _find(nxt, i):
    # next unused slot at or after i (path halving)
    while nxt[i] != i:
        nxt[i] = nxt[nxt[i]]
        i = nxt[i]
    return i


@njit(cache=True, nogil=True)
def greedy_count(seq, offsets, times, window, need, ends):
    """Earliest-ending disjoint occurrences of ``seq`` (array of type ids).

    Scans the last type's timestamps in order.  For each unused event at time
    ``T`` it builds the elementwise-earliest chain of unused events starting
    at or after ``T - window``; when that chain ends exactly at ``T`` it is
    taken and its events are retired.  Exact when the sequence has no repeated
    type, has length <= 2, or repeats a single type.

    With ``need > 0`` the scan stops as soon as ``need`` is out of reach, so
    the result is exact only when it is >= ``need``.  When ``ends`` is
    non-empty (length >= the last type's event count) the end time of each
    taken occurrence is written to it in order.
    """
    m = seq.shape[0]
    slot = np.empty(m, np.int64)
    slot_type = np.empty(m, np.int64)
    nslots = 0
    for k in range(m):
        found = -1
        for j in range(nslots):
            if slot_type[j] == seq[k]:
                found = j
                break
        if found < 0:
            slot_type[nslots] = seq[k]
            found = nslots
            nslots += 1
        slot[k] = found

    # one next-unused array per distinct type, each with a trailing sentinel
    base = np.empty(nslots + 1, np.int64)
    base[0] = 0
    for j in range(nslots):
        t = slot_type[j]
        base[j + 1] = base[j] + (offsets[t + 1] - offsets[t]) + 1
    nxt = np.arange(base[nslots])
    chain = np.empty(m, np.int64)

    last = seq[m - 1]
    last_times = times[offsets[last] : offsets[last + 1]]
    last_base = base[slot[m - 1]]
    n_last = last_times.shape[0]
    count = 0
    for j in range(n_last):
        if need > 0 and count + (n_last - j) < need:
            break
        if _find(nxt, last_base + j) != last_base + j:
            continue
        horizon = last_times[j]

        t0 = seq[0]
        arr = times[offsets[t0] : offsets[t0 + 1]]
        b = base[slot[0]]
        q = _find(nxt, b + np.searchsorted(arr, horizon - window)) - b
        if q >= arr.shape[0]:
            continue
        chain[0] = q
        prev = arr[q]
        ok = True
        for k in range(1, m):
            tk = seq[k]
            arr = times[offsets[tk] : offsets[tk + 1]]
            b = base[slot[k]]
            q = _find(nxt, b + np.searchsorted(arr, prev, side="right")) - b
            if q >= arr.shape[0] or arr[q] > horizon:
                ok = False
                break
            chain[k] = q
            prev = arr[q]
        if not ok:
            continue
        for k in range(m):
            i = base[slot[k]] + chain[k]
            nxt[i] = i + 1
        if ends.shape[0] > 0:
            ends[count] = horizon
        count += 1
    return count
