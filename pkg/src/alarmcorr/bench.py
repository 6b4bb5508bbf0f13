"""Support-threshold sweeps over the three constraint settings.

Each ``(support, setting)`` pair is mined ``repeats`` times.  The reported
time is the fastest repeat, and covers ``mine()`` only: no parsing, rule
generation or file output.
"""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import dataclass, field

from .alarms import AlarmQueue
from .miner import ConstraintConfig, FrequentSet, SupportThreshold, mine
from .rules import average_occurrence_times, generate_rules
from .serialize import dumps_frequent, dumps_rules, write_atomic
from .topology import ConfigModel

SETTINGS = {"Nocons": "none", "Inter": "inter", "Intra": "intra"}
DEFAULT_SUPPORTS = (10, 20, 40, 80)


@dataclass
class BenchRow:
    support: str
    setting: str
    seconds: float
    frequent: FrequentSet
    rules: list

    def total(self, min_length: int = 2) -> int:
        return self.frequent.total(min_length)


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    max_length: int = 0

    def row(self, support, setting) -> BenchRow:
        for r in self.rows:
            if r.support == str(support) and r.setting == setting:
                return r
        raise KeyError((support, setting))

    def supports(self) -> list[str]:
        return list(dict.fromkeys(r.support for r in self.rows))


def run_bench(
    queue: AlarmQueue,
    model: ConfigModel,
    window: int,
    supports=DEFAULT_SUPPORTS,
    *,
    settings=tuple(SETTINGS),
    application: str = "generation",
    scope=None,
    min_conf: float = 0.0,
    repeats: int = 1,
    workers: int = 1,
    max_length: int | None = None,
    progress=None,
) -> BenchReport:
    report = BenchReport()
    for sup in supports:
        threshold = sup if isinstance(sup, SupportThreshold) else SupportThreshold.parse(str(sup))
        for name in settings:
            cons = ConstraintConfig(SETTINGS[name], scope, application)
            best = float("inf")
            fs = None
            for _ in range(max(1, repeats)):
                t0 = time.perf_counter()
                fs = mine(queue, model, window, threshold, cons, max_length=max_length, workers=workers)
                best = min(best, time.perf_counter() - t0)
            rules = generate_rules(fs, queue, window, min_conf, workers=workers)
            row = BenchRow(str(threshold), name, best, fs, rules)
            report.rows.append(row)
            report.max_length = max(report.max_length, max(fs.lengths(), default=0))
            if progress is not None:
                progress(row)
    return report


def _csv(header, rows) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return out.getvalue()


def average_times_table(report: BenchReport) -> str:
    lengths = range(1, report.max_length + 1)
    rows = []
    for r in report.rows:
        cells = []
        for m in lengths:
            cells.append(f"{average_occurrence_times(r.frequent, m):.6f}" if r.frequent.level(m) else "")
        rows.append([r.support, r.setting, *cells])
    return _csv(["support", "setting", *[f"avg_times_m{m}" for m in lengths]], rows)


def execution_time_table(report: BenchReport) -> str:
    return _csv(["support", "setting", "seconds"], [[r.support, r.setting, f"{r.seconds:.6f}"] for r in report.rows])


def sequence_count_table(report: BenchReport) -> str:
    lengths = range(1, report.max_length + 1)
    rows = [
        [r.support, r.setting, r.total(2), *[len(r.frequent.level(m)) for m in lengths]]
        for r in report.rows
    ]
    return _csv(["support", "setting", "total_m_ge_2", *[f"n_m{m}" for m in lengths]], rows)


def run_file_stem(row: BenchRow) -> str:
    return f"{row.setting.lower()}_s{row.support}"


def write_report(report: BenchReport, out_dir, window: int, min_conf: float = 0.0) -> list[str]:
    """Figure tables plus one frequent-set and one rule file per run."""
    os.makedirs(os.path.join(out_dir, "runs"), exist_ok=True)
    written = []
    tables = {
        "fig5_average_times.csv": average_times_table(report),
        "fig6_execution_time.csv": execution_time_table(report),
        "fig7_sequence_counts.csv": sequence_count_table(report),
    }
    for name, text in tables.items():
        path = os.path.join(out_dir, name)
        write_atomic(path, text)
        written.append(path)
    for r in report.rows:
        stem = os.path.join(out_dir, "runs", run_file_stem(r))
        write_atomic(stem + ".frequent.json", dumps_frequent(r.frequent))
        write_atomic(stem + ".rules.json", dumps_rules(r.rules, window, r.frequent.n_tuples, min_conf))
        written += [stem + ".frequent.json", stem + ".rules.json"]
    return written
