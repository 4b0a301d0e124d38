"""Timing comparison of the pure-Python and compiled bitset kernels.

Runs each workload against both backends and prints a small table; when
the extension is not built only the pure column appears. The workloads
mirror the verifier hot paths: full combination sweeps on instances that
pass (so nothing short-circuits), tuple sweeps, and field table builds.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

from univset._kernels import pure

try:
    from univset._kernels import _fast
except ImportError:
    _fast = None


def dense_masks(rng, count, nbits, density):
    out = []
    for _ in range(count):
        mask = 0
        for b in range(nbits):
            if rng.random() < density:
                mask |= 1 << b
        out.append(mask)
    return out


def combo_workload():
    # Dense rows: every 3-wise AND stays nonzero, forcing the full sweep.
    rng = random.Random(0)
    nbits = 512
    base = (1 << nbits) - 1
    masks = dense_masks(rng, 48, nbits, 0.9)
    return lambda kern: kern.sweep_combos(base, masks, nbits, 3)


def tuple_workload():
    rng = random.Random(1)
    nbits = 256
    base = (1 << nbits) - 1
    tables = [dense_masks(rng, 96, nbits, 0.85) for _ in range(2)]
    return lambda kern: kern.sweep_tuples(base, tables, nbits)


def exp_workload():
    # GF(3^7): 2186 table entries of schoolbook degree-7 arithmetic.
    from univset.gf import build_field

    ctx = build_field(3, 7)
    return lambda kern: kern.exp_table(ctx.p, ctx.m, ctx.modulus, ctx.gen)


def best_of(fn, kern, repeat):
    # sanity: both backends must return identical results
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(kern)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = ap.parse_args()

    workloads = [
        ("sweep_combos 48C3 x 512 bits", combo_workload()),
        ("sweep_tuples 96^2 x 256 bits", tuple_workload()),
        ("exp_table GF(3^7)", exp_workload()),
    ]

    header = f"{'workload':32s} {'pure':>10s}"
    if _fast is not None:
        header += f" {'compiled':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, fn in workloads:
        if _fast is not None:
            got_pure, got_fast = fn(pure), fn(_fast)
            pf = got_pure if not hasattr(got_pure, "tolist") else got_pure.tolist()
            ff = got_fast if not hasattr(got_fast, "tolist") else got_fast.tolist()
            assert pf == ff, f"{name}: backends disagree"
        t_pure = best_of(fn, pure, args.repeat)
        row = f"{name:32s} {t_pure * 1e3:8.2f}ms"
        if _fast is not None:
            t_fast = best_of(fn, _fast, args.repeat)
            row += f" {t_fast * 1e3:8.2f}ms {t_pure / t_fast:7.1f}x"
        print(row)
    if _fast is None:
        print("\ncompiled kernels not built; showing the pure backend only")


if __name__ == "__main__":
    main()
