"""Timings for the arithmetic kernels, pure Python vs the compiled twin.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import random
import time

import rackrs._kernels_py as pure
from rackrs.field_tower import build_field
from rackrs.moduli import MODULI

try:
    import rackrs._kernels_cy as comp
except ImportError:
    comp = None


def pack(mod, p):
    out = 0
    for c in reversed(mod):
        out = out * p + c
    return out


def timeit(fn, reps):
    start = time.perf_counter()
    fn(reps)
    return time.perf_counter() - start


def bench_mul(mod_k, p, t, packed, data, reps):
    def body(n):
        i = 0
        for _ in range(n):
            a, b = data[i % len(data)]
            mod_k.pp_mul(a, b, p, packed, t)
            i += 1
    return body


def bench_horner(mod_k, p, t, packed, coeffs, xs, reps):
    def body(n):
        for i in range(n):
            mod_k.horner(coeffs, xs[i % len(xs)], p, packed, t)
    return body


def bench_tables(mod_k, p, t, packed, gen):
    def body(n):
        for _ in range(n):
            mod_k.build_exp_log(p, t, packed, gen)
    return body


def main():
    rng = random.Random(1)
    rows = []
    for (p, t, mul_reps, tab_reps) in [(2, 8, 200_000, 50),
                                       (2, 16, 50_000, 2),
                                       (3, 5, 50_000, 20),
                                       (2, 20, 20_000, 0)]:
        packed = pack(MODULI[(p, t)], p)
        size = p ** t
        F = build_field(p, t)
        data = [(rng.randrange(size), rng.randrange(size)) for _ in range(512)]
        coeffs = [rng.randrange(size) for _ in range(16)]
        xs = [rng.randrange(size) for _ in range(256)]
        for name, mod_k in [("pure", pure)] + ([("cython", comp)] if comp else []):
            tm = timeit(bench_mul(mod_k, p, t, packed, data, mul_reps), mul_reps)
            th = timeit(bench_horner(mod_k, p, t, packed, coeffs, xs, mul_reps // 10),
                        mul_reps // 10)
            rows.append((f"GF({p}^{t})", name,
                         f"{mul_reps / tm / 1e6:8.2f}",
                         f"{(mul_reps // 10) / th / 1e3:8.1f}"))
            if tab_reps:
                tt = timeit(bench_tables(mod_k, p, t, packed, F.generator), tab_reps)
                rows[-1] = rows[-1] + (f"{tt / tab_reps * 1e3:8.2f}",)
            else:
                rows[-1] = rows[-1] + ("       -",)
    print(f"{'field':>9} {'backend':>8} {'mul M/s':>9} {'horner k/s':>11} {'tables ms':>10}")
    for r in rows:
        print(f"{r[0]:>9} {r[1]:>8} {r[2]:>9} {r[3]:>11} {r[4]:>10}")


if __name__ == "__main__":
    main()
