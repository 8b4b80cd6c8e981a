"""Build script.

The anchored pattern-matching kernel has an optional Cython build
(tangleca._match_c).  If Cython or a C compiler is missing the build
falls back to the pure-Python kernel; the package works either way.
"""
import os
from setuptools import setup

ext_modules = []
if os.environ.get("TANGLECA_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/tangleca/_match_c.pyx"],
            language_level=3,
        )
    except ImportError:
        pass

try:
    setup(ext_modules=ext_modules)
except SystemExit:
    if not ext_modules:
        raise
    # C toolchain broken: retry as pure Python.
    setup(ext_modules=[])
