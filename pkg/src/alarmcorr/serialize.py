"""Reading and writing result files.

Layouts are described in ``docs/formats.md``.  Writers produce the same bytes
for the same result, and every file lands through a temp file and a rename.
"""

from __future__ import annotations

import json
import os
import tempfile

from .alarms import AlarmType
from .errors import ParseError
from .miner import ConstraintConfig, FrequentSequence, FrequentSet

FREQUENT_FORMAT = "alarmcorr.frequent"
RULES_FORMAT = "alarmcorr.rules"
VERSION = 1


def write_atomic(path, text: str) -> None:
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def frequent_to_dict(fs: FrequentSet) -> dict:
    return {
        "format": FREQUENT_FORMAT,
        "version": VERSION,
        "window": fs.window,
        "n_tuples": fs.n_tuples,
        "min_count": fs.min_count,
        "max_length": fs.max_length,
        "constraints": fs.constraints.to_dict(),
        "levels": [
            {
                "length": m,
                "sequences": [
                    {"sequence": [list(a) for a in e.sequence], "count": e.count, "support": e.support}
                    for e in fs.level(m)
                ],
            }
            for m in fs.lengths()
        ],
    }


def dumps_frequent(fs: FrequentSet) -> str:
    return _dump(frequent_to_dict(fs))


def frequent_from_dict(doc: dict, source: str | None = None) -> FrequentSet:
    if not isinstance(doc, dict) or doc.get("format") != FREQUENT_FORMAT:
        raise ParseError(f"not a {FREQUENT_FORMAT} document", source=source)
    if doc.get("version") != VERSION:
        raise ParseError(f"unsupported version {doc.get('version')!r}", source=source)
    try:
        cons = doc["constraints"]
        fs = FrequentSet(
            n_tuples=int(doc["n_tuples"]),
            window=int(doc["window"]),
            min_count=int(doc["min_count"]),
            constraints=ConstraintConfig(
                cons["mode"], None if cons["scope"] is None else tuple(cons["scope"]),
                cons["application"], cons["scope_mode"],
            ),
            max_length=doc["max_length"],
        )
        for level in doc["levels"]:
            m = int(level["length"])
            entries = []
            for item in level["sequences"]:
                seq = tuple(AlarmType(*map(int, a)) for a in item["sequence"])
                if len(seq) != m:
                    raise ParseError(f"sequence of length {len(seq)} filed under length {m}", source=source)
                entries.append(FrequentSequence(seq, int(item["count"]), float(item["support"])))
            fs.by_length[m] = entries
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad frequent-set document: {exc}", source=source) from None
    return fs


def write_frequent(path, fs: FrequentSet) -> None:
    write_atomic(path, dumps_frequent(fs))


def read_frequent(path) -> FrequentSet:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", exc.lineno, str(path)) from None
    return frequent_from_dict(doc, str(path))


def rules_to_dict(rules, window: int, n_tuples: int, min_conf: float, all_splits: bool = False) -> dict:
    out = []
    for r in rules:
        item = {
            "antecedent": [list(a) for a in r.antecedent],
            "consequent": [list(a) for a in r.consequent],
            "confidence": r.confidence,
            "support": r.support,
            "interval": r.interval,
            "counts": {
                "whole": r.whole_count,
                "antecedent": r.antecedent_count,
                "consequent": r.consequent_count,
            },
        }
        if r.alt_confidence is not None:
            item["alt_confidence"] = r.alt_confidence
        out.append(item)
    return {
        "format": RULES_FORMAT,
        "version": VERSION,
        "window": window,
        "n_tuples": n_tuples,
        "min_conf": min_conf,
        "antecedents": "all" if all_splits else "prefix",
        "rules": out,
    }


def dumps_rules(rules, window: int, n_tuples: int, min_conf: float, all_splits: bool = False) -> str:
    return _dump(rules_to_dict(rules, window, n_tuples, min_conf, all_splits))


def format_rules_text(rules) -> str:
    return "".join(f"{r}\n" for r in rules)


def write_rules(path, rules, window: int, n_tuples: int, min_conf: float, all_splits: bool = False) -> None:
    write_atomic(path, dumps_rules(rules, window, n_tuples, min_conf, all_splits))
