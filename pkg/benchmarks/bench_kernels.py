"""Time the commutation scan on both backends.

Symmetric gates force a full scan over all ``N^2 (N^2 - 1) / 2`` pairs of
pairwise products, which is the worst case.

    python3 benchmarks/bench_kernels.py [--sizes 4 8 12 16] [--repeat 5]
"""

import argparse
import timeit

from orthogate import _kernels_py
from orthogate.symmetry import pairwise_products, random_symmetric_gate

try:
    from orthogate import _kernels
except ImportError:
    _kernels = None


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 12, 16])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = {"python": _kernels_py.first_noncommuting}
    if _kernels is not None:
        backends["compiled"] = _kernels.first_noncommuting
    else:
        print("compiled extension not built; timing the fallback only")

    print(f"{'N':>4} {'pairs':>8} " + " ".join(f"{name:>12}" for name in backends) + f" {'speedup':>8}")
    for N in args.sizes:
        P = pairwise_products(random_symmetric_gate(N, seed=N))
        pairs = P.shape[0] * (P.shape[0] - 1) // 2
        times = {}
        for name, fn in backends.items():
            assert fn(P, 1e-9)[0] == -1
            number = max(1, int(2000 // pairs) + 1)
            best = min(timeit.repeat(lambda: fn(P, 1e-9), number=number, repeat=args.repeat))
            times[name] = best / number
        row = f"{N:>4} {pairs:>8} " + " ".join(f"{times[n] * 1e3:>10.3f}ms" for n in backends)
        if "compiled" in times:
            row += f" {times['python'] / times['compiled']:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
