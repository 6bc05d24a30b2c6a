"""Compiled vs numpy kernel timings on full-domain enumerations.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""

import argparse
import json
import time

import numpy as np

from strengthlab import kernels
from strengthlab.expsum import char_sum_exact
from strengthlab.generators import gen_F
from strengthlab.gf import field_create
from strengthlab.poly import random_poly

CASES = [
    # (label, field (p, s), builder)
    ("F^8_2 over F_2, 2^16 pts", (2, 1), lambda f: [gen_F(8, 2, f)]),
    ("F^5_2 over F_5, 5^10 pts", (5, 1), lambda f: [gen_F(5, 2, f)]),
    ("cubic over F_3, 3^11 pts", (3, 1), lambda f: [random_poly(f, 11, 3, 30, 1)]),
    ("pair over F_9, 9^5 pts", (3, 2), lambda f: [random_poly(f, 5, 3, 12, 2), random_poly(f, 5, 2, 8, 3)]),
]


def best_of(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = fn()
        out.append(time.perf_counter() - t0)
    return min(out), res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()
    backends = kernels.available_backends()
    rows = []
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':32s} {'kernel':11s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for label, (p, s), build in CASES:
        fld = field_create(p, s)
        cf = kernels.compile_family(build(fld))
        total = cf.size
        for kname in ("trace_hist", "zero_count"):
            times, results = {}, {}
            for b in backends:
                kern = getattr(kernels.get_backend(b), kname)
                times[b], results[b] = best_of(lambda: kern(cf, 0, total), args.repeat)
            vals = list(results.values())
            assert all(np.array_equal(np.asarray(vals[0]), np.asarray(v)) for v in vals), "backends disagree"
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{label:32s} {kname:11s} " + " ".join(f"{times[b]:9.3f}s" for b in backends)
                  + f"   {speed:6.1f}x")
            rows.append({"case": label, "kernel": kname, "points": total,
                         "seconds": times, "speedup": speed})
    print()
    print("end-to-end exact bias of F^5_2 over F_5, by threads")
    P = gen_F(5, 2, field_create(5))
    for b in backends:
        for t in (1, 4):
            sec, _ = best_of(lambda: char_sum_exact(P, threads=t, backend=b), args.repeat)
            print(f"  {b:8s} threads={t}  {sec:7.3f}s")
            rows.append({"case": "char_sum_exact F^5_2/F_5", "backend": b, "threads": t, "seconds": sec})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
