"""Random small alarm queues shared by the oracle comparisons."""

from alarmcorr.alarms import AlarmQueue, AlarmType

# classes on the generated types, so constraint tests see a mix
_CLASSES = (10, 20, 30)


def random_types(rng, n):
    return [AlarmType(_CLASSES[i % 3], i // 3 + 1, 1 + i % 2) for i in range(n)]


def random_queue(rng, max_events, max_types=8, window=None, per_window=(0.5, 4.0)):
    """A queue of up to ``max_events`` events over up to ``max_types`` types.

    The horizon is sized so that on average ``per_window`` events (drawn
    uniformly from the range) fall inside one window, which keeps exhaustive
    enumeration tractable while still producing dense overlapping stretches.
    Returns ``(queue, window)``.
    """
    w = window if window is not None else rng.randint(1, 50)
    types = random_types(rng, rng.randint(1, max_types))
    n = rng.randint(1, max_events)
    density = rng.uniform(*per_window)
    horizon = max(n, int(n * (w + 1) / density))
    events = [(rng.choice(types), rng.randrange(horizon)) for _ in range(n)]
    return AlarmQueue.from_events(events), w
