"""Build script: compiles the optional integer-kernel extension.

The package works without the extension (pure numpy fallback); a missing
compiler or Cython only costs speed, so build errors here are non-fatal.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: skipping compiled kernels ({exc}); pure fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); pure fallback will be used")


def extensions():
    import os

    if not os.path.exists("src/dtorsion/intlinalg/_speedups.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; building without compiled kernels")
        return []
    return cythonize(
        [
            Extension(
                "dtorsion.intlinalg._speedups",
                ["src/dtorsion/intlinalg/_speedups.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
