import os

from setuptools import setup

ext_modules = []
if os.environ.get("FREEFIX_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        from setuptools import Extension

        ext = Extension("freefix._kernels", ["src/freefix/_kernels.pyx"], extra_compile_args=["-O3"])
        ext_modules = cythonize([ext], language_level="3")

setup(ext_modules=ext_modules)
