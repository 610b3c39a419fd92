"""Builds the optional Cython kernels; the package works without them."""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, LAPACK headers absent, ...
            print(f"warning: compiled kernels not built ({exc}); using the numpy backend",
                  file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using the numpy backend",
                  file=sys.stderr)


def extensions():
    if os.environ.get("PTSSH_NO_EXTENSION"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension("ptssh._kernels", ["src/ptssh/_kernels.pyx"],
                    include_dirs=[numpy.get_include()])
    return cythonize([ext], language_level=3, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
