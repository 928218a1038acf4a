import os

from setuptools import Extension, setup

# The compiled kernels are optional: without Cython (or a compiler) the
# package falls back to the numpy implementation at import time.
ext_modules = []
if os.environ.get("UNCPOLY_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("uncpoly._ckernels", ["src/uncpoly/_ckernels.pyx"], include_dirs=[numpy.get_include()],
                       extra_compile_args=["-O3"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
