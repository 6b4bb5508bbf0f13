import csv
import io

import pytest

from alarmcorr.bench import execution_time_table, run_bench, sequence_count_table, write_report
from alarmcorr.synth import generate_workload, small_profile


@pytest.fixture(scope="module")
def workload():
    return generate_workload(small_profile(1))


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_twelve_rows(workload):
    rep = run_bench(workload.queue, workload.model, 5, (10, 20, 40, 80))
    assert len(rep.rows) == 12
    assert rep.supports() == ["10", "20", "40", "80"]
    assert len(table(execution_time_table(rep))) == 12


def test_output_mode_partition(workload):
    rep = run_bench(workload.queue, workload.model, 5, (10, 30), application="output")
    rows = table(sequence_count_table(rep))
    for sup in ("10", "30"):
        got = {r["setting"]: r for r in rows if r["support"] == sup}
        assert int(got["Nocons"]["total_m_ge_2"]) == int(got["Inter"]["total_m_ge_2"]) + int(got["Intra"]["total_m_ge_2"])
        for m in range(2, rep.max_length + 1):
            col = f"n_m{m}"
            assert int(got["Nocons"][col]) == int(got["Inter"][col]) + int(got["Intra"][col])


def test_rerun_same_counts(workload, tmp_path):
    a = run_bench(workload.queue, workload.model, 5, (20,))
    b = run_bench(workload.queue, workload.model, 5, (20,), workers=3)
    assert sequence_count_table(a) == sequence_count_table(b)
    write_report(a, tmp_path / "a", 5)
    write_report(b, tmp_path / "b", 5)
    for f in sorted((tmp_path / "a" / "runs").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / "runs" / f.name).read_bytes()
