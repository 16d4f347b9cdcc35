"""Build script: compiles the optional Cython kernel extension.

Set GINICORR_PURE_PYTHON=1 to skip the extension entirely; the package
then runs on the blocked-numpy fallback kernels.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("GINICORR_PURE_PYTHON"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ginicorr._kernels",
                    sources=["src/ginicorr/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        # No Cython available: install pure-Python, fallback kernels take over.
        ext_modules = []

setup(ext_modules=ext_modules)
