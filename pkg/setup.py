"""Build script for the optional compiled solver kernels.

The package works without the extension; a pure-Python fallback is
selected at import time when the compiled module is absent.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Try to build the accelerator, degrade to pure Python on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: compiled kernels skipped ({exc}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-Python fallback will be used")


def make_extensions():
    if os.environ.get("CELLFREE_NO_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "cellfree.tpc._kernels",
        ["src/cellfree/tpc/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=make_extensions(), cmdclass={"build_ext": OptionalBuildExt})
