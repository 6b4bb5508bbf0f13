"""Alarm events, simultaneous alarm tuples and the time-ordered alarm queue.

Log format, one event per line::

    timestamp,object_class,object_instance,alarm_num,priority,description

``timestamp`` is integer seconds since the epoch or ``YYYY-MM-DD-HH`` (UTC,
hour granularity).  Everything after the fifth comma is the description.
"""

from __future__ import annotations

import calendar
import io
import os
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import EmptyLog, MalformedLine, UnknownElement
from .topology import ConfigModel, ElementId


class AlarmType(NamedTuple):
    """Identity of an alarm kind raised on one network element."""

    object_class: int
    object_instance: int
    alarm_num: int

    @property
    def element(self) -> ElementId:
        return ElementId(self.object_class, self.object_instance)

    def __str__(self):
        return f"{self.element}#{self.alarm_num}"


class AlarmDescriptor(NamedTuple):
    # metadata only, never part of an alarm's identity
    priority: int = 0
    description: str = ""


class AlarmEvent(NamedTuple):
    alarm_type: AlarmType
    timestamp: int


class AlarmTuple(NamedTuple):
    alarm_types: frozenset
    timestamp: int

    @property
    def length(self) -> int:
        return len(self.alarm_types)


class QueueStats(NamedTuple):
    events: int
    tuples: int
    distinct_types: int
    span: int


class TypeIndex(NamedTuple):
    """Per-type sorted timestamps in CSR layout.

    ``times[offsets[k]:offsets[k + 1]]`` holds the timestamps of the tuples
    containing ``types[k]``; ``types`` is sorted canonically.
    """

    types: tuple
    ids: Mapping[AlarmType, int]
    offsets: np.ndarray
    times: np.ndarray

    def times_of(self, alarm_type: AlarmType) -> np.ndarray:
        k = self.ids[alarm_type]
        return self.times[self.offsets[k] : self.offsets[k + 1]]


@dataclass(frozen=True)
class AlarmQueue:
    tuples: tuple = ()
    descriptors: Mapping[AlarmType, AlarmDescriptor] = field(default_factory=dict, compare=True)

    def __post_init__(self):
        prev = None
        for tup in self.tuples:
            if not tup.alarm_types:
                raise ValueError(f"empty alarm tuple at t={tup.timestamp}")
            if prev is not None and tup.timestamp <= prev:
                raise ValueError("alarm tuples must have strictly increasing timestamps")
            prev = tup.timestamp

    @classmethod
    def from_events(cls, events: Iterable, descriptors=None) -> "AlarmQueue":
        """Group ``(alarm_type, timestamp)`` pairs into tuples.

        Input order is irrelevant and exact duplicates collapse.
        """
        groups = defaultdict(set)
        for ev in events:
            alarm_type, ts = ev
            if ts < 0:
                raise ValueError(f"negative timestamp {ts}")
            groups[int(ts)].add(AlarmType(*alarm_type))
        tuples = tuple(AlarmTuple(frozenset(groups[t]), t) for t in sorted(groups))
        return cls(tuples, dict(descriptors or {}))

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def events(self):
        """Events in (timestamp, canonical type) order."""
        for tup in self.tuples:
            for alarm_type in sorted(tup.alarm_types):
                yield AlarmEvent(alarm_type, tup.timestamp)

    @property
    def n_events(self) -> int:
        return sum(len(t.alarm_types) for t in self.tuples)

    @cached_property
    def alarm_types(self) -> tuple:
        return tuple(sorted({a for t in self.tuples for a in t.alarm_types}))

    @cached_property
    def index(self) -> TypeIndex:
        per_type = defaultdict(list)
        for tup in self.tuples:
            for a in tup.alarm_types:
                per_type[a].append(tup.timestamp)
        types = self.alarm_types
        offsets = np.zeros(len(types) + 1, dtype=np.int64)
        for k, a in enumerate(types):
            offsets[k + 1] = offsets[k] + len(per_type[a])
        times = np.empty(int(offsets[-1]), dtype=np.int64)
        for k, a in enumerate(types):
            times[offsets[k] : offsets[k + 1]] = per_type[a]
        return TypeIndex(types, {a: k for k, a in enumerate(types)}, offsets, times)


_HOUR_STAMP = re.compile(r"^(\d{4})-(\d{2})-(\d{2})-(\d{2})$")


def parse_timestamp(text: str) -> int:
    """Integer seconds, or ``YYYY-MM-DD-HH`` converted at hour granularity (UTC)."""
    text = text.strip()
    if text.isdigit():
        return int(text)
    m = _HOUR_STAMP.match(text)
    if not m:
        raise ValueError(f"bad timestamp {text!r}")
    year, month, day, hour = map(int, m.groups())
    if not (1 <= month <= 12 and 1 <= day <= 31 and 0 <= hour <= 23):
        raise ValueError(f"bad timestamp {text!r}")
    try:
        return calendar.timegm((year, month, day, hour, 0, 0))
    except (ValueError, OverflowError):
        raise ValueError(f"bad timestamp {text!r}") from None


def parse_alarm_log(stream: Iterable[str], model: ConfigModel, source: str | None = None) -> AlarmQueue:
    """Parse a log into an :class:`AlarmQueue`, checking elements against ``model``."""
    events = set()
    descriptors: dict[AlarmType, AlarmDescriptor] = {}
    for lineno, line in enumerate(stream, 1):
        line = line.rstrip("\r\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split(",", 5)
        if len(parts) < 5:
            raise MalformedLine(f"expected at least 5 fields, got {len(parts)}", lineno, source)
        try:
            ts = parse_timestamp(parts[0])
            c, i, num, prio = (int(p.strip()) for p in parts[1:5])
        except ValueError as exc:
            raise MalformedLine(str(exc), lineno, source) from None
        if min(c, i, num) < 0:
            raise MalformedLine(f"negative field in {stripped!r}", lineno, source)
        alarm_type = AlarmType(c, i, num)
        if alarm_type.element not in model:
            where = f"{source}:{lineno}" if source else f"line {lineno}"
            raise UnknownElement(f"{where}: element {tuple(alarm_type.element)} not in topology")
        desc = parts[5].strip() if len(parts) > 5 else ""
        descriptors.setdefault(alarm_type, AlarmDescriptor(prio, desc))
        events.add((alarm_type, ts))
    if not events:
        raise EmptyLog("alarm log contains no events", source=source)
    return AlarmQueue.from_events(events, descriptors)


def read_alarm_log(path: str | os.PathLike, model: ConfigModel) -> AlarmQueue:
    with open(path, encoding="utf-8") as fh:
        return parse_alarm_log(fh, model, source=str(path))


def format_alarm_log(queue: AlarmQueue, header: str | None = None) -> str:
    out = io.StringIO()
    if header:
        for line in header.splitlines():
            out.write(f"# {line}\n")
    for ev in queue.events():
        d = queue.descriptors.get(ev.alarm_type, AlarmDescriptor())
        desc = d.description.replace("\r", " ").replace("\n", " ")
        a = ev.alarm_type
        out.write(f"{ev.timestamp},{a.object_class},{a.object_instance},{a.alarm_num},{d.priority},{desc}\n")
    return out.getvalue()


def queue_stats(queue: AlarmQueue) -> QueueStats:
    if not queue.tuples:
        return QueueStats(0, 0, 0, 0)
    return QueueStats(
        events=queue.n_events,
        tuples=len(queue.tuples),
        distinct_types=len(queue.alarm_types),
        span=queue.tuples[-1].timestamp - queue.tuples[0].timestamp,
    )
