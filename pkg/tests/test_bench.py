import runpy
from pathlib import Path

from foldquiv import fplinalg as fl

BENCH = Path(__file__).parent.parent / "benchmarks" / "bench_kernels.py"


def test_benchmark_runs_and_restores_backend():
    before = fl.BACKEND
    mod = runpy.run_path(str(BENCH))
    res = mod["run"](1, 1, 0)
    assert len(res) == 4 and all("python" in t for t in res.values())
    assert fl.BACKEND == before
