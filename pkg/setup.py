"""Build hooks for the optional compiled kernels.

The package is pure Python except for one hot loop (weighted partial sums
over singular-value runs, used by the Dixmier estimators at N ~ 1e7).  The
Cython extension is a speedup only; if it fails to build, the NumPy
fallback in spectre._kernels is selected at import time.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: compiled kernels skipped ({exc}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-Python fallback will be used")


try:
    from Cython.Build import cythonize
    extensions = cythonize(
        ["src/spectre/_kernels/_core.pyx"],
        language_level=3,
    )
except Exception:
    extensions = []

setup(
    ext_modules=extensions,
    cmdclass={"build_ext": optional_build_ext},
)
