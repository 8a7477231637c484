"""Builds the optional compiled kernel extension.

The package works without it (``omgd._kernels_py`` is a pure-Python twin
selected at import time), so a missing compiler only costs speed.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.errors import CCompilerError, ExecError, PlatformError
from setuptools.extension import Extension


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except (PlatformError, FileNotFoundError) as exc:
            _warn_skipped(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except (CCompilerError, ExecError, PlatformError, ValueError) as exc:
            _warn_skipped(exc)


def _warn_skipped(exc):
    warnings.warn(
        f"compiled kernels not built ({exc}); falling back to pure Python"
    )


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "omgd._kernels",
                ["src/omgd/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
