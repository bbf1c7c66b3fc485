"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a missing Cython or a failed compilation is not fatal.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "walkprep._kernels.cy_backend",
                ["src/walkprep/_kernels/cy_backend.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
