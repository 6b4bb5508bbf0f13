"""Constrained mining of correlated alarm sequences in GSM alarm logs."""

from .alarms import (
    AlarmDescriptor,
    AlarmEvent,
    AlarmQueue,
    AlarmTuple,
    AlarmType,
    parse_alarm_log,
    queue_stats,
    read_alarm_log,
)
from .errors import *  # noqa: F401,F403
from .miner import (
    ConstraintConfig,
    FrequentSequence,
    FrequentSet,
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
from .oracle import oracle_count, oracle_mine
from .rules import CorrelationRule, average_occurrence_times, generate_rules, rule_confidence
from .synth import PlantedPattern, WorkloadSpec, generate_workload
from .topology import ROOT, ConfigModel, ElementId, ObjectClass, ancestors, in_scope, load_topology, read_topology

__version__ = "0.1.0"
