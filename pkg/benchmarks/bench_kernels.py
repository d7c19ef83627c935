"""Compare the compiled kernels against the pure-Python fallback.

Runs the three hot loops (poly_mul, poly_addmul, vec_addmul) and one
end-to-end Groebner reduction on both backends and prints a small table.
The two backends must agree exactly; timings show what the extension
buys.  Run as: python3 benchmarks/bench_kernels.py
"""

import random
import time
from fractions import Fraction

from dvarkit import _purekernel
from dvarkit.kernel import BACKEND

try:
    from dvarkit import _fastkernel
except ImportError:
    _fastkernel = None


def random_terms(rng, nvars, nterms, deg):
    out = {}
    while len(out) < nterms:
        e = tuple(rng.randint(0, deg) for _ in range(nvars))
        out[e] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
    return out


def bench(label, fn, reps):
    t0 = time.perf_counter()
    for _ in range(reps):
        result = fn()
    dt = (time.perf_counter() - t0) / reps
    return label, dt, result


def groebner_workload():
    from dvarkit.dvariety import build_system
    from dvarkit.integrals import search_polynomial_integrals
    from dvarkit.parsing import parse_problem_file

    sys_ = build_system(parse_problem_file("ode: y'' = 6*y^2 + t\n"))
    return search_polynomial_integrals(sys_, 4)


def main():
    rng = random.Random(20240)
    a = random_terms(rng, 4, 60, 5)
    b = random_terms(rng, 4, 60, 5)
    vec = [Fraction(rng.randint(-99, 99), rng.randint(1, 99)) for _ in range(400)]
    coeff = Fraction(7, 3)
    shift = (1, 0, 2, 0)

    backends = [("python", _purekernel)]
    if _fastkernel is not None:
        backends.append(("cython", _fastkernel))
    print(f"active backend in dvarkit.kernel: {BACKEND}\n")
    print(f"{'kernel':<14}{'backend':<10}{'sec/call':>12}")

    results = {}
    for name, mod in backends:
        cases = [
            ("poly_mul", lambda: mod.poly_mul(a, b), 50),
            ("poly_addmul", lambda: mod.poly_addmul(dict(a), b, coeff, shift), 200),
            ("vec_addmul", lambda: mod.vec_addmul(list(vec), vec, coeff), 500),
        ]
        for label, fn, reps in cases:
            label, dt, result = bench(label, fn, reps)
            print(f"{label:<14}{name:<10}{dt:>12.3e}")
            results.setdefault(label, []).append(result)

    for label, outs in results.items():
        if len(outs) == 2 and outs[0] != outs[1]:
            raise AssertionError(f"backend mismatch in {label}")
    if _fastkernel is not None:
        print("\nbackends agree on all three kernels")

    t0 = time.perf_counter()
    found = groebner_workload()
    print(f"\nend-to-end degree-4 search ({BACKEND} backend): "
          f"{time.perf_counter() - t0:.3f} s, {len(found)} integrals")


if __name__ == "__main__":
    main()
