import os
import sys

import numpy as np
from setuptools import setup, Extension
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the compiled kernels when no compiler is usable; the numpy
    fallback is picked up at import time."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover
            print(f"warning: compiled kernels not built ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: failed to build {ext.name} ({exc})")


# Fast-math lets gcc call glibc's vectorized log1p/expm1/cbrt (libmvec); the
# kernels only ever see finite samples. It is a compile flag only, so the
# flush-to-zero startup object is not linked into the module.
# HARDYANO_PORTABLE=1 drops -march=native for builds meant for other machines.
compile_args = ["-O3", "-ffast-math"]
libraries = []
if sys.platform.startswith("linux"):
    libraries = ["mvec", "m"]
    if os.environ.get("HARDYANO_PORTABLE", "") in ("", "0"):
        compile_args.append("-march=native")

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hardyano._kernels",
                ["src/hardyano/_kernels.pyx"],
                include_dirs=[np.get_include()],
                libraries=libraries,
                extra_compile_args=compile_args,
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:  # pragma: no cover
    ext_modules = []


setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
