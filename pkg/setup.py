"""Build the optional compiled alignment kernel.

Everything else is declared in pyproject.toml. When Cython or a C compiler
is missing the package still installs and runs on the pure-Python kernel.
"""

import logging

from setuptools import setup
from setuptools.command.build_ext import build_ext

log = logging.getLogger("setup")


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            log.warning("skipping compiled kernel: %s", exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            log.warning("skipping %s: %s", ext.name, exc)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        log.warning("Cython not available; using the pure-Python kernel")
        return []
    from setuptools import Extension

    return cythonize(
        [Extension("itnforge._calign", ["src/itnforge/_calign.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
