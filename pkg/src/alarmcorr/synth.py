"""Synthetic alarm workloads with planted correlated sequences.

Randomness comes from numpy's ``Generator(PCG64(seed))`` only, so a spec and
seed always produce the same files.

The alphabet binds each ``alarm_num`` to one network element, chosen once per
workload by class weight, so ``alphabet_size`` is also the number of distinct
alarm types the noise can produce.  Planted occurrences sit in disjoint time
slots, which makes each pattern's injection count a floor on its count no
matter what the noise does.  Noise that would land on an already used
``(type, timestamp)`` is re-drawn so the event total is exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .alarms import AlarmDescriptor, AlarmQueue, AlarmType, format_alarm_log
from .errors import SpecInfeasible
from .oracle import oracle_count, oracle_mine  # noqa: F401  (re-exported)
from .topology import ConfigModel, ObjectClass, build_tree, format_topology

# 2001-03-15 00:00 UTC
DEFAULT_START = 984614400

DEFAULT_CLASS_WEIGHTS = {
    ObjectClass.MSC: 0.12,
    ObjectClass.MSC_BSC_LINK: 0.03,
    ObjectClass.BSC: 0.17,
    ObjectClass.BSC_BTS_LINK: 0.03,
    ObjectClass.BTS: 0.65,
}

INTRA = "intra"
INTER = "inter"


@dataclass(frozen=True)
class PlantedPattern:
    sequence: tuple
    injections: int
    max_spread: int
    kind: str = ""

    def __post_init__(self):
        seq = tuple(AlarmType(*a) for a in self.sequence)
        object.__setattr__(self, "sequence", seq)
        if len(seq) < 2:
            raise ValueError("a planted pattern needs at least 2 elements")
        if self.injections < 1:
            raise ValueError("injections must be >= 1")
        if self.max_spread < len(seq) - 1:
            raise ValueError(
                f"max_spread {self.max_spread} leaves no room for {len(seq)} strictly increasing timestamps"
            )
        kind = INTRA if len({a.object_class for a in seq}) == 1 else INTER
        if self.kind and self.kind != kind:
            raise ValueError(f"pattern declared {self.kind!r} but its classes make it {kind!r}")
        object.__setattr__(self, "kind", kind)


@dataclass(frozen=True)
class WorkloadSpec:
    topology_shape: tuple = (2, 8, 8)
    alphabet_size: int = 181
    total_events: int = 90_000
    planted_patterns: tuple = ()
    noise_rate: float = 0.2
    seed: int = 1
    class_weights: dict = field(default_factory=lambda: dict(DEFAULT_CLASS_WEIGHTS))
    links: bool = True
    start_time: int = DEFAULT_START

    def __post_init__(self):
        object.__setattr__(self, "planted_patterns", tuple(self.planted_patterns))
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        if self.total_events < 0:
            raise ValueError("total_events must be >= 0")
        if self.noise_rate < 0:
            raise ValueError("noise_rate must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def planted_events(self) -> int:
        return sum(p.injections * len(p.sequence) for p in self.planted_patterns)

    @property
    def noise_events(self) -> int:
        return self.total_events - self.planted_events

    def model(self) -> ConfigModel:
        return build_tree(*self.topology_shape, links=self.links)


@dataclass
class Workload:
    model: ConfigModel
    queue: AlarmQueue
    manifest: dict

    def topology_text(self) -> str:
        return format_topology(self.model, header="synthetic topology")

    def log_text(self) -> str:
        return format_alarm_log(self.queue, header="synthetic alarm log")

    def manifest_text(self) -> str:
        return json.dumps(self.manifest, indent=2, sort_keys=True) + "\n"


def _rng(seed: int, stream: int) -> np.random.Generator:
    # separate streams so the alphabet does not shift when noise settings change
    return np.random.Generator(np.random.PCG64([stream, seed]))


def build_alphabet(spec: WorkloadSpec) -> tuple:
    """The workload's alarm types, one per ``alarm_num`` in ``1..alphabet_size``."""
    model = spec.model()
    by_class = {}
    for e in sorted(model.elements):
        by_class.setdefault(e.object_class, []).append(e)
    classes = [c for c in sorted(spec.class_weights) if spec.class_weights[c] > 0 and c in by_class]
    if not classes:
        raise SpecInfeasible("no element class with positive weight exists in the topology")
    w = np.array([spec.class_weights[c] for c in classes], dtype=float)
    rng = _rng(spec.seed, 0)
    picks = rng.choice(len(classes), size=spec.alphabet_size, p=w / w.sum())
    types = []
    for num, k in enumerate(picks, 1):
        members = by_class[classes[k]]
        e = members[int(rng.integers(len(members)))]
        types.append(AlarmType(e.object_class, e.object_instance, num))
    return tuple(types)


def pick_patterns(
    alphabet,
    n_intra: int,
    n_inter: int,
    *,
    lengths=(2, 3, 4),
    injections=(170, 220),
    max_spread: int = 8,
    seed: int = 1,
) -> tuple:
    """Random planted patterns over ``alphabet`` with the requested class mix.

    Intra patterns draw all elements from one class.  Inter patterns use as
    many distinct classes as their length allows, so their sub-sequences are
    mostly inter as well.  No alarm type is used by two patterns.
    """
    rng = _rng(seed, 2)
    by_class = {}
    for a in alphabet:
        by_class.setdefault(a.object_class, []).append(a)
    free = {c: list(ts) for c, ts in by_class.items()}
    out = []

    def take(c):
        pool = free[c]
        if not pool:
            raise SpecInfeasible(f"alphabet ran out of class-{c} types for planted patterns")
        return pool.pop(int(rng.integers(len(pool))))

    for kind in [INTRA] * n_intra + [INTER] * n_inter:
        m = int(lengths[int(rng.integers(len(lengths)))])
        if kind == INTRA:
            roomy = [c for c in sorted(free) if len(free[c]) >= m]
            if not roomy:
                raise SpecInfeasible(f"no class has {m} unused types for an intra pattern")
            c = roomy[int(rng.integers(len(roomy)))]
            seq = [take(c) for _ in range(m)]
        else:
            avail = [c for c in sorted(free) if free[c]]
            if len(avail) < 2:
                raise SpecInfeasible("inter patterns need two classes with unused types")
            order = [avail[i] for i in rng.permutation(len(avail))]
            if sum(len(free[c]) for c in order) < m:
                raise SpecInfeasible(f"alphabet ran out of unused types for a length-{m} inter pattern")
            seq = []
            k = 0
            while len(seq) < m:
                # rotate through the classes, passing over any already emptied
                c = order[k % len(order)]
                k += 1
                if free[c]:
                    seq.append(take(c))
        lo, hi = injections
        out.append(PlantedPattern(tuple(seq), int(rng.integers(lo, hi + 1)), max_spread, kind))
    return tuple(out)


def paper_profile(seed: int = 1, *, n_intra: int = 10, n_inter: int = 10, window: int = 5) -> WorkloadSpec:
    """181 types, 90k events over about five days on a 2 x 8 x 8 tree."""
    base = WorkloadSpec(seed=seed)
    patterns = pick_patterns(
        build_alphabet(base), n_intra, n_inter, max_spread=window - 1, seed=seed
    )
    planted = sum(p.injections * len(p.sequence) for p in patterns)
    span = 5 * 86_400
    return WorkloadSpec(
        planted_patterns=patterns,
        noise_rate=(base.total_events - planted) / span,
        seed=seed,
    )


def small_profile(seed: int = 1) -> WorkloadSpec:
    """A few thousand events, quick enough for demos and CLI smoke runs."""
    base = WorkloadSpec(topology_shape=(1, 3, 3), alphabet_size=32, total_events=3000, seed=seed)
    patterns = pick_patterns(build_alphabet(base), 2, 2, lengths=(2, 3), injections=(40, 60), max_spread=5, seed=seed)
    planted = sum(p.injections * len(p.sequence) for p in patterns)
    return WorkloadSpec(
        topology_shape=(1, 3, 3),
        alphabet_size=32,
        total_events=3000,
        planted_patterns=patterns,
        noise_rate=(3000 - planted) / 20_000,
        seed=seed,
    )


def generate_workload(spec: WorkloadSpec) -> Workload:
    """Topology, alarm queue and ground-truth manifest for ``spec``."""
    model = spec.model()
    for p in spec.planted_patterns:
        for a in p.sequence:
            if a.element not in model:
                raise SpecInfeasible(f"planted type {a} is not on a topology element")
    if spec.noise_events < 0:
        raise SpecInfeasible(
            f"planted patterns need {spec.planted_events} events but total_events is {spec.total_events}"
        )
    alphabet = build_alphabet(spec)
    rng = _rng(spec.seed, 1)

    # slots are wide enough that no occurrence can reach into the next one
    slot = max((p.max_spread for p in spec.planted_patterns), default=0) + 1
    n_inj = sum(p.injections for p in spec.planted_patterns)
    if spec.noise_rate > 0:
        span = math.ceil(spec.noise_events / spec.noise_rate) if spec.noise_events else n_inj * slot
    else:
        if spec.noise_events:
            raise SpecInfeasible("noise events requested with noise_rate 0")
        span = n_inj * slot
    n_slots = span // slot if slot else 0
    if n_inj > n_slots:
        raise SpecInfeasible(f"{n_inj} injections need {n_inj * slot} s but the horizon is {span} s")

    taken = set()
    events = []
    injections = []
    if n_inj:
        chosen = np.sort(rng.choice(n_slots, size=n_inj, replace=False))
        order = rng.permutation(n_inj)
        owner = [k for k, p in enumerate(spec.planted_patterns) for _ in range(p.injections)]
        injections = [[] for _ in spec.planted_patterns]
        for s, j in zip(chosen, order):
            p = spec.planted_patterns[owner[j]]
            m = len(p.sequence)
            offs = np.sort(rng.choice(p.max_spread + 1, size=m, replace=False))
            base = spec.start_time + int(s) * slot
            stamps = [base + int(o) for o in offs]
            for a, t in zip(p.sequence, stamps):
                taken.add((a, t))
                events.append((a, t))
            injections[owner[j]].append(stamps)

    todo = spec.noise_events
    while todo:
        ks = rng.integers(len(alphabet), size=todo)
        ts = rng.integers(span, size=todo)
        for k, t in zip(ks, ts):
            ev = (alphabet[int(k)], spec.start_time + int(t))
            if ev in taken:
                continue
            taken.add(ev)
            events.append(ev)
            todo -= 1

    descriptors = {
        a: AlarmDescriptor(priority=1 + a.alarm_num % 3, description=f"synthetic alarm {a.alarm_num}")
        for a in set(alphabet) | {a for p in spec.planted_patterns for a in p.sequence}
    }
    queue = AlarmQueue.from_events(events, descriptors)
    manifest = {
        "seed": spec.seed,
        "generator": "numpy PCG64",
        "topology_shape": list(spec.topology_shape),
        "alphabet_size": spec.alphabet_size,
        "total_events": spec.total_events,
        "noise_events": spec.noise_events,
        "span_seconds": int(span),
        "start_time": spec.start_time,
        "patterns": [
            {
                "sequence": [list(a) for a in p.sequence],
                "kind": p.kind,
                "max_spread": p.max_spread,
                "guaranteed_count": p.injections,
                "injections": sorted(injections[k]) if injections else [],
            }
            for k, p in enumerate(spec.planted_patterns)
        ],
    }
    return Workload(model, queue, manifest)


def manifest_patterns(manifest: dict) -> list[tuple[tuple, int]]:
    """``(sequence, guaranteed_count)`` pairs from a manifest dict."""
    return [
        (tuple(AlarmType(*a) for a in p["sequence"]), int(p["guaranteed_count"]))
        for p in manifest["patterns"]
    ]
