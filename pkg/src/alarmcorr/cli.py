"""Command-line front end.

Exit codes: 0 success (empty results included), 2 bad usage, 3 file I/O
failure, 4 malformed or inconsistent input data, 5 bad constraint or
threshold configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from collections import Counter

from . import bench as bench_mod
from . import synth
from .alarms import queue_stats, read_alarm_log
from .errors import (
    AlarmCorrError,
    ConstraintError,
    InconsistentInputs,
    ParseError,
    SpecInfeasible,
    TopologyError,
    UnknownElement,
)
from .miner import ConstraintConfig, SupportThreshold, mine
from .rules import generate_rules
from .serialize import dumps_frequent, dumps_rules, format_rules_text, read_frequent, write_atomic
from .topology import ElementId, read_topology

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INPUT = 4
EXIT_CONFIG = 5


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _add_data(p, required=True):
    p.add_argument("--topology", required=required, help="configuration tree file")
    p.add_argument("--alarms", required=required, help="alarm log file")


def _add_mining(p, support_required=True):
    p.add_argument("--window", type=_positive_int, required=True, help="viewing window width in seconds")
    if support_required:
        p.add_argument("--min-support", required=True,
                       help="integer = occurrence count, decimal in (0,1] = fraction of tuples")
    p.add_argument("--constraint", choices=["none", "inter", "intra"], default="none")
    p.add_argument("--scope", help="restrict to the subtree under CLASS:INSTANCE, e.g. 10:1")
    p.add_argument("--scope-mode", choices=["subtree", "class"], default="subtree",
                   help="subtree containment (default) or class-code threshold")
    p.add_argument("--apply", choices=["generation", "output"], default="generation",
                   help="filter candidates level by level, or only the report")
    p.add_argument("--max-length", type=_positive_int, help="stop after this sequence length")
    p.add_argument("--workers", type=_positive_int, default=1, help="counting threads (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alarmcorr", description="Constrained alarm-correlation mining.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine frequent sequences and rules from a log")
    _add_data(p)
    _add_mining(p)
    p.add_argument("--min-conf", type=_nonneg_float, default=0.0)
    p.add_argument("--all-splits", action="store_true", help="any sub-sequence may be an antecedent")
    p.add_argument("--diagnostics", action="store_true", help="also report the alternative ratio")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("rules", help="rules from a saved frequent-set file")
    _add_data(p)
    p.add_argument("--frequent", required=True, help="frequent-set JSON written by 'mine'")
    p.add_argument("--min-conf", type=_nonneg_float, default=0.0)
    p.add_argument("--all-splits", action="store_true")
    p.add_argument("--diagnostics", action="store_true")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("generate", help="write a synthetic workload")
    p.add_argument("--profile", choices=["paper", "small"], default="paper")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--window", type=_positive_int, default=5, help="window the planted spreads fit in")
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="summary of a topology and log")
    _add_data(p)

    p = sub.add_parser("bench", help="support sweep over Nocons / Inter / Intra")
    _add_data(p, required=False)
    p.add_argument("--profile", choices=["paper", "small"], default="paper",
                   help="synthetic workload used when no files are given")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--supports", default="10,20,40,80", help="comma-separated minimum supports")
    p.add_argument("--window", type=_positive_int, default=5)
    p.add_argument("--apply", choices=["generation", "output"], default="generation")
    p.add_argument("--scope")
    p.add_argument("--min-conf", type=_nonneg_float, default=0.0)
    p.add_argument("--repeats", type=_positive_int, default=1, help="time each run this often, keep the fastest")
    p.add_argument("--max-length", type=_positive_int)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", required=True)
    return parser


def _threshold(text) -> SupportThreshold:
    try:
        return SupportThreshold.parse(text)
    except ConstraintError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from None


def _scope(text):
    if text is None:
        return None
    try:
        return ElementId.parse(text)
    except ValueError as exc:
        raise _Fail(EXIT_CONFIG, f"--scope: {exc}") from None


def _load(args):
    for path in (args.topology, args.alarms):
        if not os.path.isfile(path):
            raise _Fail(EXIT_IO, f"cannot read {path}: no such file")
    model = read_topology(args.topology)
    queue = read_alarm_log(args.alarms, model)
    return model, queue


def _constraints(args, model) -> ConstraintConfig:
    cons = ConstraintConfig(args.constraint, _scope(args.scope), args.apply, args.scope_mode)
    try:
        cons.validate(model)
    except UnknownElement as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from None
    return cons


def _ensure_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot create {path}: {exc.strerror}") from None


def _write_rules(out, rules, window, n, min_conf, all_splits):
    write_atomic(os.path.join(out, "rules.json"), dumps_rules(rules, window, n, min_conf, all_splits))
    write_atomic(os.path.join(out, "rules.txt"), format_rules_text(rules))


def cmd_mine(args, out=sys.stdout) -> int:
    threshold = _threshold(args.min_support)
    _scope(args.scope)
    model, queue = _load(args)
    cons = _constraints(args, model)
    _ensure_dir(args.out)
    t0 = time.perf_counter()
    fs = mine(queue, model, args.window, threshold, cons, max_length=args.max_length, workers=args.workers)
    elapsed = time.perf_counter() - t0
    rules = generate_rules(fs, queue, args.window, args.min_conf,
                           all_splits=args.all_splits, diagnostics=args.diagnostics, workers=args.workers)
    write_atomic(os.path.join(args.out, "frequent.json"), dumps_frequent(fs))
    _write_rules(args.out, rules, args.window, fs.n_tuples, args.min_conf, args.all_splits)
    levels = fs.lengths()
    print(f"tuples: {fs.n_tuples}  window: {args.window}s  min count: {fs.min_count}", file=out)
    print(f"levels reached: {max(levels, default=0)}", file=out)
    for m in levels:
        print(f"  length {m}: {len(fs.level(m))} sequences", file=out)
    print(f"frequent sequences: {len(fs)}", file=out)
    print(f"rules emitted: {len(rules)}", file=out)
    print(f"mining time: {elapsed:.3f}s", file=out)
    return EXIT_OK


def cmd_rules(args, out=sys.stdout) -> int:
    if not os.path.isfile(args.frequent):
        raise _Fail(EXIT_IO, f"cannot read {args.frequent}: no such file")
    model, queue = _load(args)
    fs = read_frequent(args.frequent)
    _ensure_dir(args.out)
    rules = generate_rules(fs, queue, fs.window, args.min_conf,
                           all_splits=args.all_splits, diagnostics=args.diagnostics, workers=args.workers)
    _write_rules(args.out, rules, fs.window, fs.n_tuples, args.min_conf, args.all_splits)
    print(f"rules emitted: {len(rules)}", file=out)
    return EXIT_OK


def _workload(profile, seed, window):
    try:
        spec = synth.paper_profile(seed, window=window) if profile == "paper" else synth.small_profile(seed)
        return synth.generate_workload(spec)
    except ValueError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from None


def write_workload(wl, folder) -> None:
    write_atomic(os.path.join(folder, "topology.txt"), wl.topology_text())
    write_atomic(os.path.join(folder, "alarms.log"), wl.log_text())
    write_atomic(os.path.join(folder, "manifest.json"), wl.manifest_text())


def cmd_generate(args, out=sys.stdout) -> int:
    if args.window < 2:
        raise _Fail(EXIT_CONFIG, "--window must be >= 2 so planted pairs fit")
    wl = _workload(args.profile, args.seed, args.window)
    _ensure_dir(args.out)
    write_workload(wl, args.out)
    st = queue_stats(wl.queue)
    print(f"wrote {st.events} events, {st.distinct_types} alarm types, "
          f"{len(wl.manifest['patterns'])} planted patterns to {args.out}", file=out)
    return EXIT_OK


def cmd_stats(args, out=sys.stdout) -> int:
    model, queue = _load(args)
    st = queue_stats(queue)
    per_class = Counter(e.object_class for e in model.elements)
    print(f"elements: {len(model)}  " + "  ".join(f"class {c}: {n}" for c, n in sorted(per_class.items())), file=out)
    print(f"events: {st.events}", file=out)
    print(f"tuples: {st.tuples}", file=out)
    print(f"alarm types: {st.distinct_types}", file=out)
    print(f"span: {st.span}s", file=out)
    sizes = Counter(t.length for t in queue.tuples)
    print("tuple sizes: " + ", ".join(f"{k}:{v}" for k, v in sorted(sizes.items())), file=out)
    return EXIT_OK


def cmd_bench(args, out=sys.stdout) -> int:
    if (args.topology is None) != (args.alarms is None):
        raise _Fail(EXIT_USAGE, "--topology and --alarms must be given together")
    supports = [_threshold(s) for s in args.supports.split(",") if s.strip()]
    if not supports:
        raise _Fail(EXIT_CONFIG, "--supports is empty")
    scope = _scope(args.scope)
    if args.topology is not None:
        model, queue = _load(args)
    else:
        if args.window < 2:
            raise _Fail(EXIT_CONFIG, "--window must be >= 2 for a generated workload")
        wl = _workload(args.profile, args.seed, args.window)
        model, queue = wl.model, wl.queue
        _ensure_dir(os.path.join(args.out, "workload"))
        write_workload(wl, os.path.join(args.out, "workload"))
    if scope is not None and scope not in model:
        raise _Fail(EXIT_CONFIG, f"scope element {tuple(scope)} not in topology")
    _ensure_dir(args.out)

    def show(row):
        print(f"support {row.support:>6}  {row.setting:<6}  {row.seconds:8.3f}s  "
              f"{row.total(2):6d} sequences (m>=2)  {len(row.rules):6d} rules", file=out, flush=True)

    report = bench_mod.run_bench(
        queue, model, args.window, supports,
        application=args.apply, scope=scope, min_conf=args.min_conf,
        repeats=args.repeats, workers=args.workers, max_length=args.max_length, progress=show,
    )
    bench_mod.write_report(report, args.out, args.window, args.min_conf)
    print(f"tables written to {args.out}", file=out)
    return EXIT_OK


COMMANDS = {
    "mine": cmd_mine,
    "rules": cmd_rules,
    "generate": cmd_generate,
    "stats": cmd_stats,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, sys.stdout)
    except _Fail as exc:
        code, msg = exc.code, str(exc)
    except (ConstraintError, SpecInfeasible) as exc:
        code, msg = EXIT_CONFIG, str(exc)
    except (ParseError, TopologyError, UnknownElement, InconsistentInputs, json.JSONDecodeError) as exc:
        code, msg = EXIT_INPUT, str(exc)
    except OSError as exc:
        code, msg = EXIT_IO, f"{exc.filename or ''}: {exc.strerror or exc}".lstrip(": ")
    except AlarmCorrError as exc:
        code, msg = EXIT_INPUT, str(exc)
    print(f"alarmcorr: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
