import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from alarmcorr.alarms import (
    AlarmDescriptor,
    AlarmQueue,
    AlarmType,
    format_alarm_log,
    parse_alarm_log,
    parse_timestamp,
    queue_stats,
)
from alarmcorr.errors import EmptyLog, MalformedLine, UnknownElement
from alarmcorr.topology import build_tree

BTS42 = AlarmType(30, 42, 7)
BSC7 = AlarmType(20, 7, 3)

LOG = "5,30,42,7,2,cell down\n5,20,7,3,1,link flap\n9,30,42,7,2,cell down\n"


def test_grouping(chain_model):
    q = parse_alarm_log(io.StringIO(LOG), chain_model)
    assert len(q) == 2
    assert q.tuples[0].alarm_types == {BTS42, BSC7} and q.tuples[0].timestamp == 5
    assert q.tuples[1].alarm_types == {BTS42} and q.tuples[1].timestamp == 9
    assert q.descriptors[BTS42] == AlarmDescriptor(2, "cell down")
    assert queue_stats(q) == (3, 2, 2, 4)


def test_single_event(chain_model):
    q = parse_alarm_log(io.StringIO("3,30,42,7,0\n"), chain_model)
    assert len(q) == 1 and q.tuples[0].length == 1


def test_unknown_element(chain_model):
    with pytest.raises(UnknownElement):
        parse_alarm_log(io.StringIO("3,20,99,1,0,x\n"), chain_model)


def test_empty_stats():
    assert queue_stats(AlarmQueue()) == (0, 0, 0, 0)


def test_empty_log(chain_model):
    with pytest.raises(EmptyLog):
        parse_alarm_log(io.StringIO("# nothing\n\n"), chain_model)


@pytest.mark.parametrize("text", ["5,30,42\n", "x,30,42,7,0\n", "5,30,42,7,p\n", "5,30,-42,7,0\n", "2001-13-01-00,30,42,7,0\n"])
def test_malformed(chain_model, text):
    with pytest.raises(MalformedLine) as exc:
        parse_alarm_log(io.StringIO("1,30,42,7,0\n" + text), chain_model, source="log")
    assert exc.value.line == 2


def test_description_may_hold_commas(chain_model):
    q = parse_alarm_log(io.StringIO("1,30,42,7,0,a, b, c\n"), chain_model)
    assert q.descriptors[BTS42].description == "a, b, c"


def test_hour_timestamps():
    assert parse_timestamp("2001-03-15-00") == 984614400
    assert parse_timestamp("2001-03-19-23") == 984614400 + 4 * 86400 + 23 * 3600


def test_descriptor_not_identity(chain_model):
    q = parse_alarm_log(io.StringIO("1,30,42,7,0,one\n2,30,42,7,5,two\n"), chain_model)
    assert q.alarm_types == (BTS42,)


def test_unsorted_input_and_duplicates(chain_model):
    q = parse_alarm_log(io.StringIO("9,30,42,7,0\n5,30,42,7,0\n5,30,42,7,0\n"), chain_model)
    assert [t.timestamp for t in q] == [5, 9] and q.n_events == 2


def test_queue_rejects_unordered():
    from alarmcorr.alarms import AlarmTuple

    with pytest.raises(ValueError):
        AlarmQueue((AlarmTuple(frozenset({BTS42}), 5), AlarmTuple(frozenset({BTS42}), 5)))


def test_type_index():
    q = AlarmQueue.from_events([(BTS42, 3), (BSC7, 1), (BTS42, 1)])
    assert list(q.index.times_of(BTS42)) == [1, 3]
    assert list(q.index.times_of(BSC7)) == [1]


MODEL = build_tree(1, 2, 2)
TYPES = [AlarmType(c, i, n) for c, i in [(10, 1), (20, 1), (20, 2), (30, 3), (23, 4)] for n in (0, 1)]
events = st.lists(st.tuples(st.sampled_from(TYPES), st.integers(0, 60)), min_size=1, max_size=40)
desc = st.text(st.characters(blacklist_categories=("Cs",)), max_size=12)


@given(events, st.dictionaries(st.sampled_from(TYPES), st.tuples(st.integers(0, 9), desc)))
def test_round_trip_fixpoint(evs, descs):
    q = AlarmQueue.from_events(evs, {a: AlarmDescriptor(*d) for a, d in descs.items() if a in {e[0] for e in evs}})
    once = parse_alarm_log(io.StringIO(format_alarm_log(q)), MODEL)
    twice = parse_alarm_log(io.StringIO(format_alarm_log(once)), MODEL)
    assert once.tuples == q.tuples
    assert twice == once
    assert sum(t.length for t in q) == len(set(evs))
    stamps = [t.timestamp for t in q]
    assert stamps == sorted(set(stamps))
