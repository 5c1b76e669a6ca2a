"""Build script.

The package is pure Python; an optional Cython extension accelerates the
scalar hot kernels (aperture Green's function, quadrature integrands, Born
volume sums). If Cython or a C compiler is missing the extension is skipped
and the numpy fallback in greens_coulomb.kernels._ref is used at import time.

Build the accelerator in place with:

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    import numpy

    ext = Extension(
        "greens_coulomb.kernels._fast",
        sources=["src/greens_coulomb/kernels/_fast.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    ext.optional = True
    ext_modules = cythonize(
        [ext],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except ImportError:  # Cython or numpy missing: pure install
    pass

setup(ext_modules=ext_modules)
