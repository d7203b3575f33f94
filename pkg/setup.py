"""Build script: compiles the optional Cython geometry kernel.

The package is fully functional without the extension (a pure-NumPy
fallback is selected at import time), so any compilation failure is
downgraded to a warning instead of aborting the install.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "matroid_elicit._facetadj",
                ["src/matroid_elicit/_facetadj.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    warnings.warn(f"building without compiled kernel ({exc}); pure fallback will be used")
    ext_modules = []

setup(ext_modules=ext_modules)
