import os

from setuptools import Extension, setup

# The compiled kernels are optional: without them the package falls back to
# the numpy implementation at import time. Set WORDVIS_NO_EXT=1 to skip.
ext_modules = []
if os.environ.get("WORDVIS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("wordvis._native_kernels", ["src/wordvis/_native_kernels.pyx"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
