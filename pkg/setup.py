"""Build script: compiles the optional fast kernel core.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so a failed compile only costs speed. Set
GAUGELAB_NO_EXT=1 to skip the build entirely.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("GAUGELAB_NO_EXT") == "1":
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "gaugelab.kernels._core",
        ["src/gaugelab/kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
