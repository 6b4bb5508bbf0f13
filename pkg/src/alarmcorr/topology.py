"""GSM configuration model: a tree of network elements rooted at the PLMN.

Each element is identified by ``(object_class, object_instance)``.  The
configuration file lists one ``object_class,object_instance,parent_class,
parent_instance`` record per line and the loader checks that the records form
a single legal tree under ``PLMN(0, 0)``.
"""

from __future__ import annotations

import enum
import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    ConflictingParent,
    CycleDetected,
    DanglingParent,
    IllegalParentClass,
    MalformedLine,
    UnknownClassCode,
    UnknownElement,
)


class ObjectClass(enum.IntEnum):
    PLMN = 0
    MSC = 10
    MSC_BSC_LINK = 12
    BSC = 20
    BSC_BTS_LINK = 23
    BTS = 30


# child class -> the only class allowed as its parent
PARENT_CLASS = {
    ObjectClass.MSC: ObjectClass.PLMN,
    ObjectClass.BSC: ObjectClass.MSC,
    ObjectClass.BTS: ObjectClass.BSC,
    ObjectClass.MSC_BSC_LINK: ObjectClass.MSC,
    ObjectClass.BSC_BTS_LINK: ObjectClass.BSC,
}

LINK_CLASSES = frozenset({ObjectClass.MSC_BSC_LINK, ObjectClass.BSC_BTS_LINK})


def object_class(code: int) -> ObjectClass:
    try:
        return ObjectClass(code)
    except ValueError:
        raise UnknownClassCode(f"unknown object class code {code!r}") from None


class ElementId(NamedTuple):
    object_class: int
    object_instance: int

    def __str__(self):
        try:
            name = ObjectClass(self.object_class).name
        except ValueError:
            name = str(self.object_class)
        return f"{name}-{self.object_instance}"

    @classmethod
    def parse(cls, text: str) -> "ElementId":
        """Parse ``CLASS:INSTANCE`` (e.g. ``10:1``)."""
        try:
            c, i = text.split(":")
            c, i = int(c), int(i)
        except ValueError:
            raise ValueError(f"expected CLASS:INSTANCE, got {text!r}") from None
        if c < 0 or i < 0:
            raise ValueError(f"negative component in {text!r}")
        return cls(c, i)


ROOT = ElementId(ObjectClass.PLMN, 0)


class ConfigRecord(NamedTuple):
    element: ElementId
    parent: ElementId


@dataclass(frozen=True)
class ConfigModel:
    """Validated configuration tree.  Immutable after construction."""

    parent_of: Mapping[ElementId, ElementId]
    elements: frozenset = field(default=frozenset())

    def __contains__(self, element) -> bool:
        return element in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def children(self, element: ElementId) -> list[ElementId]:
        return sorted(e for e, p in self.parent_of.items() if p == element)

    def records(self) -> list[ConfigRecord]:
        """Records in parent-before-child order, suitable for re-serializing."""
        return sorted(
            (ConfigRecord(e, p) for e, p in self.parent_of.items()),
            key=lambda r: (len(ancestors(self, r.element)), r.element),
        )


def _check_record(rec: ConfigRecord) -> None:
    child = object_class(rec.element.object_class)
    parent = object_class(rec.parent.object_class)
    if rec.element.object_instance < 0 or rec.parent.object_instance < 0:
        raise MalformedLine(f"negative instance in {rec}")
    if child == ObjectClass.PLMN:
        if rec.element != ROOT or rec.parent != ROOT:
            raise IllegalParentClass(
                f"PLMN admits only the root record 0,0,0,0 (got {tuple(rec.element)} -> {tuple(rec.parent)})"
            )
        return
    if PARENT_CLASS[child] != parent:
        raise IllegalParentClass(
            f"{child.name} {tuple(rec.element)} cannot have a {parent.name} parent"
        )
    if parent == ObjectClass.PLMN and rec.parent != ROOT:
        raise IllegalParentClass(f"class 0 admits only instance 0 (got {tuple(rec.parent)})")


def load_topology(records: Iterable) -> ConfigModel:
    """Validate ``records`` and build the configuration tree.

    Records may be :class:`ConfigRecord` objects or 4-tuples of ints.  The
    root ``(0, 0)`` is always present; listing it as ``0,0,0,0`` is allowed
    and is a no-op.  Identical duplicate records are accepted.
    """
    parent_of: dict[ElementId, ElementId] = {}
    for raw in records:
        if isinstance(raw, ConfigRecord):
            rec = ConfigRecord(ElementId(*raw.element), ElementId(*raw.parent))
        else:
            c, i, pc, pi = raw
            rec = ConfigRecord(ElementId(c, i), ElementId(pc, pi))
        _check_record(rec)
        if rec.element == ROOT:
            continue
        prev = parent_of.get(rec.element)
        if prev is not None and prev != rec.parent:
            raise ConflictingParent(
                f"{rec.element} listed with parents {prev} and {rec.parent}"
            )
        parent_of[rec.element] = rec.parent

    elements = set(parent_of) | {ROOT}
    for child, parent in parent_of.items():
        if parent not in elements:
            raise DanglingParent(f"parent {tuple(parent)} of {tuple(child)} is never defined")

    # Class pairings already force a strict depth order, so this is a guard
    # against future pairing tables rather than a reachable path today.
    for start in parent_of:
        seen = {start}
        node = parent_of[start]
        while node != ROOT:
            if node in seen:
                raise CycleDetected(f"cycle through {tuple(node)}")
            seen.add(node)
            node = parent_of[node]

    return ConfigModel(parent_of=dict(parent_of), elements=frozenset(elements))


def ancestors(model: ConfigModel, element: ElementId) -> list[ElementId]:
    """Parent chain of ``element`` up to and including the root."""
    if element not in model.elements:
        raise UnknownElement(f"element {tuple(element)} not in topology")
    chain = []
    node = element
    while node != ROOT:
        node = model.parent_of[node]
        chain.append(node)
    return chain


def in_scope(model: ConfigModel, scope_root: ElementId, element: ElementId) -> bool:
    """True iff ``element`` lies in the subtree rooted at ``scope_root``."""
    if scope_root not in model.elements:
        raise UnknownElement(f"scope element {tuple(scope_root)} not in topology")
    if element == scope_root:
        return True
    return scope_root in ancestors(model, element)


def parse_topology(stream: Iterable[str], source: str | None = None) -> ConfigModel:
    """Read the plain-text topology format and return a validated model."""
    records = []
    for lineno, line in enumerate(stream, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 4:
            raise MalformedLine(f"expected 4 fields, got {len(parts)}", lineno, source)
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise MalformedLine(f"non-integer field in {line!r}", lineno, source) from None
        if any(v < 0 for v in values):
            raise MalformedLine(f"negative field in {line!r}", lineno, source)
        records.append(values)
    return load_topology(records)


def read_topology(path: str | os.PathLike) -> ConfigModel:
    with open(path, encoding="utf-8") as fh:
        return parse_topology(fh, source=str(path))


def format_topology(model: ConfigModel, header: str | None = None) -> str:
    out = io.StringIO()
    if header:
        for line in header.splitlines():
            out.write(f"# {line}\n")
    for rec in model.records():
        e, p = rec
        out.write(f"{e.object_class},{e.object_instance},{p.object_class},{p.object_instance}\n")
    return out.getvalue()


def build_tree(n_msc: int, bsc_per_msc: int, bts_per_bsc: int, links: bool = True) -> ConfigModel:
    """Regular tree with sequentially numbered instances per class.

    With ``links`` each BSC gets an MSC-BSC circuit (class 12) under its MSC
    and each BTS a BSC-BTS circuit (class 23) under its BSC, numbered like the
    element they connect.
    """
    records = []
    bsc_no = bts_no = 0
    for msc in range(1, n_msc + 1):
        records.append((ObjectClass.MSC, msc, 0, 0))
        for _ in range(bsc_per_msc):
            bsc_no += 1
            records.append((ObjectClass.BSC, bsc_no, ObjectClass.MSC, msc))
            if links:
                records.append((ObjectClass.MSC_BSC_LINK, bsc_no, ObjectClass.MSC, msc))
            for _ in range(bts_per_bsc):
                bts_no += 1
                records.append((ObjectClass.BTS, bts_no, ObjectClass.BSC, bsc_no))
                if links:
                    records.append((ObjectClass.BSC_BTS_LINK, bts_no, ObjectClass.BSC, bsc_no))
    return load_topology(records)
