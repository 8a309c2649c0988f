"""Build script: compiles the optional Cython kernels.

The extension is a pure speedup; if Cython or a C compiler is missing
the build falls through and the package runs on the numpy fallback in
qstable._kernels_py.  Set QSTABLE_NO_EXT=1 to skip compilation.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("QSTABLE_NO_EXT") or not os.path.exists("src/qstable/_ext.pyx"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "qstable._ext",
        ["src/qstable/_ext.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    ext.optional = True
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions())
