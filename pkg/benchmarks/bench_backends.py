"""Time the hot kernels under both backends (numba JIT vs pure numpy).

Run from the repository root:

    python3 benchmarks/bench_backends.py [--repeat 5] [--kernels fwht,ddt,...]

Each kernel is warmed up once per backend (so numba compile time is not
measured) and the best of --repeat wall-clock timings is reported, together
with the numba speedup.  Results of the two backends are compared for
equality as a side check.
"""

import argparse
import time

import numpy as np

from apnlab import backend
from apnlab.gf2m import make_field
from apnlab.trivariate import TrivariateSpec, build_cu
from apnlab.vbf import monomial


def _workloads():
    rng = np.random.default_rng(20240901)
    cube10 = monomial(make_field(10), 3).table.astype(np.int64)
    cube6 = monomial(make_field(6), 3)
    f6 = make_field(6)
    u6 = next(v for v in range(2, 64) if not f6.is_seventh_power(v))
    spec6 = TrivariateSpec(f6, u6)
    signs = rng.choice(np.array([-1, 1], dtype=np.int64), size=(32, 1 << 14))
    ranks = rng.integers(0, 1 << 18, size=(200000, 18), dtype=np.int64)
    pts = rng.integers(0, 1 << 20, size=1 << 19, dtype=np.int64)
    prows = rng.integers(0, 1 << 20, size=20, dtype=np.int64)
    dirs9 = np.arange(1, 1 << 9, dtype=np.int64)
    zmap6 = backend.kernels().walsh_zero_bitmap(cube6.table, 6)
    exp = np.asarray(f6.exp_table, dtype=np.int64)
    log = np.asarray(f6.log_table, dtype=np.int64)
    m = f6.m
    tri = np.array(
        [(a, b, g) for a in range(4) for b in range(4) for g in range(1 << m)
         if a | b | g], dtype=np.int64)

    cu3 = build_cu(make_field(3), 2).table.astype(np.int64)
    return {
        "fwht": lambda k: k.fwht(signs.copy()),
        "mobius": lambda k: k.mobius(signs.copy() & 1),
        "walsh_zero_bitmap": lambda k: k.walsh_zero_bitmap(cube10, 10),
        "ddt_spectrum": lambda k: k.ddt_spectrum(cube10, 10),
        "rank_batch": lambda k: k.rank_batch(ranks, 18),
        "transform_batch": lambda k: k.transform_batch(pts, prows),
        "quad_direction_dims": lambda k: k.quad_direction_dims(cu3, 9, dirs9),
        "trivariate_direction_dims": lambda k: k.trivariate_direction_dims(
            exp, log, m, spec6.u, tri[:, 0], tri[:, 1], tri[:, 2], 2),
        "extract_spaces_dfs": lambda k: k.extract_spaces_dfs(zmap6, 12, 6),
    }


def _best_time(fn, k, repeat):
    fn(k)                                     # warm-up / JIT compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(k)
        best = min(best, time.perf_counter() - t0)
    return best


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5,
                    help="timed repetitions per kernel (default 5)")
    ap.add_argument("--kernels", default=None,
                    help="comma-separated subset of kernel names")
    args = ap.parse_args(argv)

    loads = _workloads()
    if args.kernels:
        wanted = args.kernels.split(",")
        missing = [w for w in wanted if w not in loads]
        if missing:
            ap.error(f"unknown kernels: {', '.join(missing)} "
                     f"(have: {', '.join(loads)})")
        loads = {k: loads[k] for k in wanted}

    if not backend.HAVE_NUMBA:
        print("numba is not importable; timing the numpy backend only")

    width = max(map(len, loads))
    header = f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fn in loads.items():
        prev = backend.active_backend()
        try:
            backend.set_backend("numpy")
            t_np = _best_time(fn, backend.kernels(), args.repeat)
            out_np = fn(backend.kernels())
            if backend.HAVE_NUMBA:
                backend.set_backend("numba")
                t_nb = _best_time(fn, backend.kernels(), args.repeat)
                out_nb = fn(backend.kernels())
                mark = "" if _same(out_np, out_nb) else "  << MISMATCH"
                print(f"{name:<{width}}  {t_np * 1e3:>8.2f}ms  "
                      f"{t_nb * 1e3:>8.2f}ms  {t_np / t_nb:>7.1f}x{mark}")
            else:
                print(f"{name:<{width}}  {t_np * 1e3:>8.2f}ms  "
                      f"{'-':>10}  {'-':>8}")
        finally:
            backend.set_backend(prev)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
