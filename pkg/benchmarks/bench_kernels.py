"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--threads N]

Each workload runs on both backends, the results are compared for equality,
and the best wall time of ``--repeat`` runs is reported.
"""

import argparse
import time
from fractions import Fraction

from constlab import _pykernels, backend
from constlab.beliefs import iid, lexicographic_orders
from constlab.stability.optimistic import lexicographic_weights


def workloads():
    w3, _ = iid(Fraction(1, 3), 3).integer_weights()
    tables3 = list(range(256))
    lex = [lexicographic_weights(o) for o in lexicographic_orders(3)]
    w4, _ = iid(Fraction(2, 5), 4).integer_weights()
    some4 = list(range(0, 65536, 257))
    yield "witness_scan n=3, 256x256, iid(1/3), arbitrary", "witness_scan", (tables3, tables3, w3, 3, True)
    yield "edge_lists n=3, 256x256, iid(1/3), sqb", "edge_lists", (tables3, tables3, w3, 3, False)
    yield "belief_scan n=3, 256x256, 720 lexicographic rows", "belief_scan", (tables3, tables3, lex, 3, True)
    yield "witness_scan n=4, 256x65536, iid(2/5), sqb", "witness_scan", (some4, list(range(65536)), w4, 4, False)


def best_of(fn, args, repeat, **kw):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=backend.threads())
    ap.add_argument("--skip-python-large", action="store_true", help="skip the slow n=4 Python run")
    args = ap.parse_args(argv)
    if not backend.has_compiled():
        print("compiled kernels are not built; only the Python backend is available")
    print(f"{'workload':55s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s}")
    for label, name, wargs in workloads():
        ct = pt = float("nan")
        c_out = p_out = None
        if backend.has_compiled():
            ct, c_out = best_of(getattr(backend.kernels(3, force="cython"), name), wargs, args.repeat,
                                threads=args.threads)
        if not (args.skip_python_large and "n=4" in label):
            pt, p_out = best_of(getattr(_pykernels, name), wargs, 1)
        if c_out is not None and p_out is not None and c_out != p_out:
            raise SystemExit(f"backends disagree on {label}")
        print(f"{label:55s} {ct:10.4f} {pt:10.4f} {pt / ct:8.1f}x")


if __name__ == "__main__":
    main()
