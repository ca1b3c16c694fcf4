"""Build script for the optional compiled kernels.

The package works without the extension; ``hompath.kernels`` falls back to
the pure-Python implementation when ``hompath._kernels`` cannot be imported.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    import numpy

    ext_modules = cythonize(
        [
            Extension(
                "hompath._kernels",
                ["src/hompath/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
