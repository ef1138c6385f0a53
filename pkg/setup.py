"""Builds the optional compiled kernel extension.

The package is fully functional without it (the pure numpy backend in
seppack.kernels.reference is selected at import time when the extension is
missing), so a failed or skipped compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "seppack.kernels._core",
                sources=["src/seppack/kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
