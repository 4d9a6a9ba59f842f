"""Build script: compiles the optional Cython kernel backend.

The package works without the extension (a NumPy fallback is selected at
import time), so any failure here downgrades to a pure-Python install
instead of aborting.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/lossymem/_kernels_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    print(f"lossymem: skipping compiled kernels ({exc!r}); using the pure-Python backend")

setup(ext_modules=ext_modules)
