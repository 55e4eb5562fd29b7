"""Build script for the compiled reduction kernel.

The package works without the extension (a pure-Python kernel is used as
a fallback), so a failed compile only costs speed, not correctness.
"""

from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "lambdasoup.kernel._ckernel",
        ["src/lambdasoup/kernel/_ckernel.pyx"],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
