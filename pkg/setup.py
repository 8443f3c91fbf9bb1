"""Build script for the compiled kernels.

The package works without the extension (a pure numpy/Python fallback is
selected at import time), but the Monte-Carlo stripping runs and exhaustive
solution enumeration are orders of magnitude faster with it.

    python setup.py build_ext --inplace    # compile in place for development
    SATGEO_PURE=1 pip install .            # skip the extension entirely
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("SATGEO_PURE") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("satgeo._kernels", ["src/satgeo/_kernels.pyx"])],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "nonecheck": False,
                "language_level": "3",
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
