import time

import pytest

from warmglove.bench import (
    BenchResult,
    BenchSpec,
    MemoryBudgetError,
    emit_bench_table,
    estimate_peak_bytes,
    hardware_metadata,
    run_bench,
    sizes_that_fit,
)
from warmglove.objective import HyperParams

HP = HyperParams(dim=8, mu=0.0, seed=0)


class TestSpec:
    @pytest.mark.parametrize("kwargs", [
        dict(vocab_sizes=()), dict(vocab_sizes=(0,)), dict(density=0.0),
        dict(density=1.2), dict(iterations_per_corpus=0), dict(corpora=0),
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            BenchSpec(**kwargs)


class TestRun:
    def test_degenerate_spec_is_fast_with_zero_stddev(self):
        spec = BenchSpec(vocab_sizes=(10,), density=0.10,
                         iterations_per_corpus=1, corpora=1, seed=0)
        start = time.perf_counter()
        results = run_bench(spec, HP)
        assert time.perf_counter() - start < 1.0
        assert {r.implementation for r in results} == {"vectorized", "loop"}
        for r in results:
            assert r.stddev_s == 0.0
            assert r.mean_s >= 0.0

    def test_one_row_per_arm_and_size(self):
        spec = BenchSpec(vocab_sizes=(10, 20), density=0.2,
                         iterations_per_corpus=1, corpora=2, seed=1)
        results = run_bench(spec, HP)
        assert [(r.implementation, r.vocab_size) for r in results] == [
            ("vectorized", 10), ("vectorized", 20), ("loop", 10), ("loop", 20)]

    def test_timed_region_excludes_setup(self):
        # the noop arm shares all setup (simulation, engine construction)
        # but times an empty step; near-zero means setup stayed outside
        spec = BenchSpec(vocab_sizes=(800,), density=0.10,
                         iterations_per_corpus=3, corpora=1, seed=2)
        noop, = run_bench(spec, HP, arms=("noop",))
        assert noop.mean_s < 1e-3

    def test_unknown_arm_rejected(self):
        spec = BenchSpec(vocab_sizes=(10,), iterations_per_corpus=1, corpora=1)
        with pytest.raises(ValueError):
            run_bench(spec, HP, arms=("gpu",))

    def test_memory_guard_names_offending_size(self):
        spec = BenchSpec(vocab_sizes=(10, 10_000_000),
                         iterations_per_corpus=1, corpora=1)
        with pytest.raises(MemoryBudgetError, match="10000000"):
            run_bench(spec, HP)

    def test_progress_callback(self):
        seen = []
        spec = BenchSpec(vocab_sizes=(10,), iterations_per_corpus=1, corpora=2)
        run_bench(spec, HP, progress=lambda arm, size, corpus:
                  seen.append((arm, size, corpus)))
        assert ("vectorized", 10, 0) in seen and ("loop", 10, 1) in seen


class TestEstimates:
    def test_estimate_grows_with_size(self):
        assert estimate_peak_bytes(2000, 0.1) < estimate_peak_bytes(4000, 0.1)

    def test_sizes_that_fit_filters(self):
        assert sizes_that_fit([10, 10_000_000], 0.1) == [10]


class TestEmit:
    def _rows(self):
        return [
            BenchResult("vectorized", 5000, 1.48, 0.02),
            BenchResult("vectorized", 10000, 7.35, 0.05),
            BenchResult("vectorized", 20000, 50.03, 0.2),
            BenchResult("loop", 5000, 14.02, 0.3),
            BenchResult("loop", 10000, 63.80, 0.4),
            BenchResult("loop", 20000, 252.65, 0.9),
        ]

    def test_empty_results_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_bench_table([], tmp_path / "b.csv")

    def test_single_row_two_line_csv(self, tmp_path):
        path = tmp_path / "b.csv"
        emit_bench_table([BenchResult("loop", 10, 0.5, 0.0)], path)
        assert len(path.read_text().splitlines()) == 2

    def test_full_grid_seven_line_csv(self, tmp_path):
        path = tmp_path / "b.csv"
        emit_bench_table(self._rows(), path)
        lines = path.read_text().splitlines()
        assert len(lines) == 7
        assert lines[0] == "implementation,vocab_size,mean_s,stddev_s"

    def test_metadata_comments_precede_header(self, tmp_path):
        path = tmp_path / "b.csv"
        emit_bench_table(self._rows(), path, metadata={"cpu": "test-cpu"})
        lines = path.read_text().splitlines()
        assert lines[0] == "# cpu: test-cpu"
        data = [ln for ln in lines if not ln.startswith("#")]
        assert len(data) == 7

    def test_text_table_layout(self, tmp_path):
        table = emit_bench_table(self._rows(), tmp_path / "b.csv")
        lines = table.splitlines()
        assert "5000" in lines[1] and "20000" in lines[1]
        assert lines[2].startswith("vectorized")
        assert lines[3].startswith("loop")
        assert "14.02" in lines[3]

    def test_roundtrip_values(self, tmp_path):
        path = tmp_path / "b.csv"
        emit_bench_table(self._rows(), path)
        body = path.read_text().splitlines()[1:]
        parsed = [ln.split(",") for ln in body]
        assert float(parsed[0][2]) == 1.48
        assert int(parsed[5][1]) == 20000


def test_hardware_metadata_keys():
    meta = hardware_metadata(threads=2)
    assert set(meta) == {"cpu", "logical_cores", "physical_cores", "blas_threads"}
    assert meta["blas_threads"] == "2"
