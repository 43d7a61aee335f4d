"""Builds the optional compiled speedups extension.

The package works without it (a pure-Python fallback is selected at
import time); building it makes the per-agent control/estimation math
roughly an order of magnitude faster.  See benchmarks/bench_kernels.py.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SWARMCONN_NO_EXT") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "swarmconn.kernels._speedups",
                ["src/swarmconn/kernels/_speedups.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
