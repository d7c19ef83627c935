"""The compiled kernels and the pure fallback must agree exactly."""

import random
import subprocess
import sys
from fractions import Fraction

from dvarkit import _purekernel
from dvarkit.kernel import BACKEND


def random_terms(rng, nvars, nterms, deg):
    out = {}
    while len(out) < nterms:
        e = tuple(rng.randint(0, deg) for _ in range(nvars))
        out[e] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
    return out


def test_backends_agree():
    try:
        from dvarkit import _fastkernel
    except ImportError:
        return  # extension not built; the fallback is the only backend
    rng = random.Random(11)
    for _ in range(20):
        a = random_terms(rng, 3, 12, 4)
        b = random_terms(rng, 3, 12, 4)
        assert _fastkernel.poly_mul(a, b) == _purekernel.poly_mul(a, b)
        coeff = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
        shift = tuple(rng.randint(0, 2) for _ in range(3))
        assert _fastkernel.poly_addmul(dict(a), b, coeff, shift) == \
            _purekernel.poly_addmul(dict(a), b, coeff, shift)
        vec = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(10)]
        assert _fastkernel.vec_addmul(list(vec), vec, coeff) == \
            _purekernel.vec_addmul(list(vec), vec, coeff)


def test_pure_env_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from dvarkit.kernel import BACKEND; print(BACKEND)"],
        env={"DVARKIT_PURE": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_backend_is_declared():
    assert BACKEND in ("cython", "python")
