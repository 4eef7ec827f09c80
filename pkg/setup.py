"""Build script: compiles the BFS engine extension when Cython is available.

The package works without the extension; mapfdc.engine falls back to the
pure-Python twin at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mapfdc/_engine_c.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
