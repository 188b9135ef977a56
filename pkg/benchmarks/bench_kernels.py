"""Time multiplier assembly with the compiled kernel and the numpy fallback.

    python3 benchmarks/bench_kernels.py --sizes 10x40 10x100 10x200 --repeat 3
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from tfplunge import _fallback
from tfplunge.dgt import LatticeParams, periodized_gaussian, symbol_kernel, tight_window
from tfplunge.masks import make_shape

try:
    from tfplunge import _kernels
except ImportError:
    _kernels = None


def parse_size(text: str) -> LatticeParams:
    a, M = text.lower().split("x")
    return LatticeParams(int(a), int(M))


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", nargs="+", type=parse_size,
                   default=[parse_size(s) for s in ("10x40", "10x100", "10x200")], help="a x M")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--shape", default="disk")
    args = p.parse_args(argv)
    if _kernels is None:
        print("compiled kernel not built; only the numpy fallback is available", file=sys.stderr)

    print(f"{'a':>4} {'M':>5} {'L':>6} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8} {'max diff':>9}")
    for lat in args.sizes:
        h = np.ascontiguousarray(tight_window(periodized_gaussian(lat.L), lat).values)
        kern = symbol_kernel(make_shape(args.shape, lat.M).astype(float))
        ref = _fallback.assemble_multiplier(h, kern, lat.a)
        t_np = min(timeit.repeat(lambda: _fallback.assemble_multiplier(h, kern, lat.a), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{lat.a:>4} {lat.M:>5} {lat.L:>6} {t_np:>10.3f} {'-':>11} {'-':>8} {'-':>9}")
            continue
        diff = float(np.max(np.abs(_kernels.assemble_multiplier(h, kern, lat.a) - ref)))
        t_cy = min(timeit.repeat(lambda: _kernels.assemble_multiplier(h, kern, lat.a), number=1, repeat=args.repeat))
        print(f"{lat.a:>4} {lat.M:>5} {lat.L:>6} {t_np:>10.3f} {t_cy:>11.3f} {t_np / t_cy:>7.1f}x {diff:>9.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
