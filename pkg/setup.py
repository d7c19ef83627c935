"""Build script.

The sparse-polynomial hot kernels live in a small Cython extension
(dvarkit._fastkernel).  If Cython or a C compiler is unavailable the
package still installs and falls back to the pure-Python kernels at
import time, so the extension build is best-effort.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/dvarkit/_fastkernel.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    print(f"dvarkit: skipping Cython extension ({exc}); pure-Python kernels will be used")

setup(ext_modules=ext_modules)
