"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--d 5 6]

Exhaustive associativity runs on Epi<=5 only (Epi<=6 has 3.4e9 triples);
the other kernels run on every requested category.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from abring import gen_epi
from abring.fincat import SAMPLE_SEED, SAMPLE_SIZE, _sample_triples
from abring.kernels import BACKENDS


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(cat):
    t = cat.table
    e, m = cat.epi_mask, cat.mono_mask
    f, g, h = _sample_triples(t, SAMPLE_SIZE, SAMPLE_SEED)
    out = {
        "assoc_sampled": lambda k: k.assoc_sampled(t, f, g, h),
        "epi_flags": lambda k: k.epi_flags(t),
        "mono_flags": lambda k: k.mono_flags(t),
        "factor_counts": lambda k: k.factor_counts(t, e, m),
        "closure_violation": lambda k: k.closure_violation(t, m),
    }
    if len(cat) <= 5000:
        out["assoc_exhaustive"] = lambda k: k.assoc_exhaustive(t)
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--d", type=int, nargs="+", default=[5, 6])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    names = [b for b in ("cython", "python") if b in BACKENDS]
    if "cython" not in BACKENDS:
        print("compiled extension not built; timing the fallback only")
    header = f"{'category':<9} {'kernel':<18}" + "".join(f"{b:>12}" for b in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for d in args.d:
        cat = gen_epi(d)
        for kernel, call in cases(cat).items():
            secs = [best_of(lambda: call(BACKENDS[b]), args.repeat) for b in names]
            row = f"{cat.name:<9} {kernel:<18}" + "".join(f"{s * 1e3:>10.2f}ms" for s in secs)
            if len(secs) == 2:
                row += f"{secs[1] / max(secs[0], 1e-9):>9.1f}x"
            print(row)
    # sanity: both backends agree on what was timed
    if len(names) == 2:
        t = gen_epi(args.d[0]).table
        assert np.array_equal(BACKENDS["cython"].epi_flags(t), BACKENDS["python"].epi_flags(t))


if __name__ == "__main__":
    main()
