import pandas as pd
import pytest

from src.cli.bench import (
    BENCH_COLUMNS,
    SUMMARY_COLUMNS,
    build_tasks,
    parse_sizes,
    run_bench,
    summarize,
    summary_path,
    write_bench,
)
from src.generators.instances import CostPolicy
from src.search.solver import solve


@pytest.mark.parametrize("text, kind, sizes", [
    ("8", "random", [8]),
    ("8..14", "random", [8, 10, 12, 14]),
    ("8..16:4", "random", [8, 12, 16]),
    ("3..5", "cage", [3, 4, 5]),
    ("6..18", "hc", [6, 12, 18]),
])
def test_parse_sizes(text, kind, sizes):
    assert parse_sizes(text, kind) == sizes


@pytest.mark.parametrize("text", ["", "8..", "a..b", "10..8", "8..10:0"])
def test_parse_sizes_rejects(text):
    with pytest.raises(ValueError):
        parse_sizes(text, "random")


def test_build_tasks_derives_instance_seeds():
    tasks = build_tasks("random", [8, 10], reps=3, runs=2, seed=5, costs=CostPolicy())
    assert len(tasks) == 6
    assert [task.spec.seed for task in tasks[:3]] == [5, 6, 7]
    assert all(task.runs == 2 for task in tasks)


def test_run_bench_rows():
    tasks = build_tasks("random", [8, 10], reps=2, runs=2, seed=1, costs=CostPolicy())
    frame = run_bench(tasks)
    assert list(frame.columns) == BENCH_COLUMNS
    assert len(frame) == 8
    assert list(frame["run"]) == [0, 1] * 4
    assert set(frame[frame["n"] == 8]["outcome"]) == {8}
    assert (frame["branches_total"] == frame["a_total"] + frame["b_total"] + frame["d_total"]).all()
    assert BENCH_COLUMNS[-2:] == ["run", "log2_eval_T"]
    assert set(frame[frame["n"] == 8]["log2_eval_T"]) == {pytest.approx(2.321928, abs=1e-6)}
    assert (frame["log2_branches"] <= frame["log2_eval_T"]).all()


def test_worker_pool_keeps_task_order():
    tasks = build_tasks("hc", [12, 18], reps=1, runs=1, seed=0, costs=CostPolicy())
    serial = run_bench(tasks, workers=1).drop(columns=["wall_ms"])
    pooled = run_bench(tasks, workers=2).drop(columns=["wall_ms"])
    pd.testing.assert_frame_equal(serial, pooled)


def test_summary_and_files(tmp_path):
    tasks = build_tasks("random", [8], reps=2, runs=1, seed=0, costs=CostPolicy("uniform"))
    frame = run_bench(tasks)
    summary = summarize(frame)
    assert list(summary.columns) == SUMMARY_COLUMNS
    assert summary.loc[0, "instances"] == 2
    assert summary.loc[0, "log2_eval_T"] == pytest.approx(2.321928, abs=1e-6)

    out, summary_file = write_bench(frame, tmp_path / "runs" / "bench.csv")
    assert summary_file == summary_path(out) == tmp_path / "runs" / "bench.summary.csv"
    assert len(pd.read_csv(out)) == 2
    assert len(pd.read_csv(summary_file)) == 1


def test_checked_runs_keep_a_trace(monkeypatch):
    captured = []
    original = solve

    def recording(graph, config=None):
        outcome, stats = original(graph, config)
        captured.append((config, stats))
        return outcome, stats

    monkeypatch.setattr("src.cli.bench.solve", recording)
    tasks = build_tasks("cage", [6], reps=1, runs=1, seed=0, costs=CostPolicy(), check_invariants=True)
    run_bench(tasks)
    config, stats = captured[0]
    assert config.trace
    assert len(stats.trace) == stats.branches > 0
