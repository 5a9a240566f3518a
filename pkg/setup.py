"""Builds the compiled arithmetic kernels when Cython is available.

The package is fully functional without the extension; kernels.py falls
back to the pure-Python twin at import time.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        ["src/rackrs/_kernels_cy.pyx"],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
