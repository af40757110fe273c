"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py --sizes 16384,262144 --repeat 5

Times each kernel on random inputs, checks that the two backends agree, and
times a full Luxemburg norm evaluation driven by each backend's ``phi_mean``.
"""

import argparse
import math
import timeit

import numpy as np

from hardyano import _kernels_py

try:
    from hardyano import _kernels
except ImportError:  # pragma: no cover
    _kernels = None


def _cases(rng, m):
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    x = np.abs(z) * 10.0
    a = np.maximum(1.0, np.cbrt(x / 4.0))
    h = rng.standard_normal(m)
    F = 1.0 / (a + 1j * h)
    return {
        "abs_power_mean": (z, 1.25),
        "abs_max": (z,),
        "phi_mean": (x, 0.3, 1.0),
        "zygmund_mean": (x, 1.0),
        "a_lambda": (x, 4.0),
        "reciprocal_analytic": (a, h),
        "g_from_f": (F,),
    }


def luxemburg(mod, x, r=1.0, tol=1e-10):
    # same bracketing and bisection as the library, parameterized by backend
    def excess(lam):
        return mod.phi_mean(x, 1.0 / lam, r) - 1.0

    lo, hi = 1e-12 * x.max(), x.max() + 1.0
    while excess(hi) > 0.0:
        lo, hi = hi, hi * 4.0
    while hi / lo - 1.0 > tol:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo) * math.sqrt(hi)


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="16384,262144,1048576")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . --no-build-isolation")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<22}{'M':>9}{'numpy ms':>11}{'cython ms':>11}{'speedup':>9}{'max rel diff':>14}")
    for m in (int(s) for s in args.sizes.split(",")):
        cases = _cases(rng, m)
        cases["luxemburg_norm"] = None
        for name, fargs in cases.items():
            if fargs is None:
                x = cases["phi_mean"][0]
                fp, fc = (lambda: luxemburg(_kernels_py, x)), (lambda: luxemburg(_kernels, x))
            else:
                fp = lambda f=getattr(_kernels_py, name), a=fargs: f(*a)
                fc = lambda f=getattr(_kernels, name), a=fargs: f(*a)
            rp, rc = np.asarray(fp()), np.asarray(fc())
            diff = float(np.max(np.abs(rp - rc) / np.maximum(np.abs(rp), 1e-300)))
            tp, tc = _best(fp, args.repeat), _best(fc, args.repeat)
            print(f"{name:<22}{m:>9}{tp * 1e3:>11.3f}{tc * 1e3:>11.3f}{tp / tc:>9.2f}{diff:>14.2e}")


if __name__ == "__main__":
    main()
