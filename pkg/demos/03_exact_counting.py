"""Why occurrence counting is not a one-pass greedy scan.

For sequences that repeat an alarm type, taking the earliest-ending
occurrence first can block a better packing.  The miner detects those cases
and switches to an exact search; the oracle confirms the result.
"""

import numpy as np

from alarmcorr import _kernels
from alarmcorr.alarms import AlarmQueue, AlarmType
from alarmcorr.miner import count_occurrences
from alarmcorr.oracle import enumerate_occurrences, oracle_count

a, b = AlarmType(30, 1, 1), AlarmType(30, 2, 1)
q = AlarmQueue.from_events([(a, 3), (b, 5), (a, 6), (a, 8), (b, 8), (a, 10)])
seq, window = (a, b, a), 5

print("occurrences:", enumerate_occurrences(seq, q, window))

ix = q.index
ids = np.array([ix.ids[x] for x in seq])
greedy = _kernels.greedy_count(ids, ix.offsets, ix.times, window, 0, np.empty(0, np.int64))
print("greedy scan:", greedy)  # takes (3, 5, 6), then nothing fits
print("miner:      ", count_occurrences(seq, q, window))  # (3, 5, 8) and (6, 8, 10)
print("oracle:     ", oracle_count(seq, q, window))
