"""Build script: compiles the optional fast-kernel extension.

The package is pure Python plus one optional Cython extension
(heisenlab._speedups) holding the hot exhaustive-scan kernels.  If Cython
or a C compiler is unavailable the build falls back to the pure-Python
kernels transparently; heisenlab.kernels selects the backend at import.
Set HEISENLAB_NO_EXT=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Treat extension build failures as non-fatal."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping C extension ({exc}); using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using pure-Python kernels")


ext_modules = []
if os.environ.get("HEISENLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("heisenlab._speedups", ["src/heisenlab/_speedups.pyx"])],
            language_level="3",
        )
    except ImportError:
        print("warning: Cython not available; using pure-Python kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
