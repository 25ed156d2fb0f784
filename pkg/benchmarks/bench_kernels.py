"""Time the Cython and pure-Python F_p kernels on the same inputs."""

import argparse
import json
import random
import timeit

import numpy as np

from foldquiv import fplinalg as fl
from foldquiv.instances import a3_c2
from foldquiv.repmod.folding import FoldingPipeline
from foldquiv.repmod.modules import hom_space
from foldquiv.repmod.quiverrep import indecomposable_for_root


def _random_matrix(rng, rows, cols, p):
    return np.array([[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], dtype=np.int64)


def _end_basis():
    """End algebra basis of the largest folded A3 module; the idempotent search runs over it."""
    q, act = a3_c2()
    fp = FoldingPipeline(q, act, 2)
    y = fp.folded_module(indecomposable_for_root(q, (1, 1, 1), 2))
    m = fp.induce(fp.module_of(indecomposable_for_root(q, (1, 0, 0), 2)))
    return hom_space(y, y), hom_space(m, m)


def workloads(seed):
    rng = random.Random(seed)
    mats = [_random_matrix(rng, 60, 60, 7) for _ in range(5)]
    end_y, end_m = _end_basis()
    # diagonal matrix units: 2^7 idempotents among 3^7 combinations
    units = np.stack([np.diag(np.eye(7, dtype=np.int64)[k]) for k in range(7)])
    return {
        "rref 60x60 over F_7 (x5)": lambda: [fl.rref(m, 7) for m in mats],
        "idempotents of End of a folded module over F_2": lambda: fl.idempotent_coefficients(end_y, 2),
        "idempotents of diagonal 7x7 over F_3": lambda: fl.idempotent_coefficients(units, 3),
        "first invertible in End(S#G) over F_2": lambda: fl.first_invertible(end_m, 2),
    }


def run(repeat, number, seed):
    backends = ["python"]
    try:
        fl.use_backend("cython")
        backends.insert(0, "cython")
    except ImportError:
        pass
    results = {}
    for name in backends:
        fl.use_backend(name)
        for label, fn in workloads(seed).items():
            best = min(timeit.repeat(fn, repeat=repeat, number=number)) / number
            results.setdefault(label, {})[name] = best
    fl.use_backend(backends[0])
    return results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    res = run(args.repeat, args.number, args.seed)
    if args.json:
        print(json.dumps(res, indent=2, sort_keys=True))
        return
    print(f"{'workload':42s} {'cython (ms)':>12s} {'python (ms)':>12s} {'speedup':>8s}")
    for label, t in res.items():
        cy, py = t.get("cython"), t["python"]
        cy_s = f"{cy * 1e3:12.3f}" if cy is not None else f"{'n/a':>12s}"
        sp = f"{py / cy:8.1f}" if cy else f"{'n/a':>8s}"
        print(f"{label:42s} {cy_s} {py * 1e3:12.3f} {sp}")


if __name__ == "__main__":
    main()
