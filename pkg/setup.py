"""Build script for the compiled Liouvillian kernel.

The package works without the extension (a numpy fallback is selected at
import time); building it makes the Fock-space oracle several times faster.
"""

from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
    import numpy

    extensions = cythonize(
        [
            Extension(
                "trimerep._kernels._liouville",
                ["src/trimerep/_kernels/_liouville.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    # no Cython available: install pure-Python package only
    extensions = []

setup(ext_modules=extensions)
