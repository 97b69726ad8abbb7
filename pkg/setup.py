"""Build script: compiles the Monte Carlo sampling core as a C extension.

The package works without the extension (a vectorized NumPy fallback is
selected at import time), so the build degrades gracefully when Cython or
a C compiler is unavailable.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "symverify._kernels._core",
                ["src/symverify/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
