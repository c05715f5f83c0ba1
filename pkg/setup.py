import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("MOONTRACE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "moontrace._ckernels",
                    ["src/moontrace/_ckernels.pyx"],
                    libraries=["mpfr", "gmp"],
                    optional=True,
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
