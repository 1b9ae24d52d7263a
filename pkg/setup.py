"""Build hooks: compile the DPLL kernel extension when Cython is available.

The package is fully functional without it (a pure-Python kernel with the
identical algorithm is selected at import time), so any build failure here
degrades gracefully instead of failing the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ebsedp/_dpllcore.pyx"],
        language_level=3,
    )
except Exception as exc:  # no Cython / no compiler: install pure-Python only
    print(f"skipping compiled kernel: {exc}")

setup(ext_modules=ext_modules)
