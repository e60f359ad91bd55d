"""Builds the optional compiled Monte Carlo kernels; the package works without them."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("DHL_OMEGA_PURE", "") not in ("1", "true", "yes"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "dhl_omega._mc_core",
                    ["src/dhl_omega/_mc_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"dhl_omega: compiled kernels disabled ({exc}); using the numpy fallback")
        ext_modules = []

setup(ext_modules=ext_modules)
