import os

from setuptools import setup

ext_modules = []
if os.environ.get("PRESBURGER_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("presburger._kernel", ["src/presburger/_kernel.pyx"])],
            language_level=3,
        )
    except ImportError:
        # Pure-Python fallback kernel is selected at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
