"""Kernel backend selection.

Imports the compiled kernels when the extension built, else the pure
Python ones.  Set DVARKIT_PURE=1 to force the fallback (the benchmark
and the twin-consistency tests use this).
"""

import os

if os.environ.get("DVARKIT_PURE"):
    from ._purekernel import BACKEND, poly_addmul, poly_mul, vec_addmul
else:
    try:
        from ._fastkernel import BACKEND, poly_addmul, poly_mul, vec_addmul
    except ImportError:
        from ._purekernel import BACKEND, poly_addmul, poly_mul, vec_addmul

__all__ = ["BACKEND", "poly_mul", "poly_addmul", "vec_addmul"]
