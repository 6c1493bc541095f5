"""Build script for the optional compiled matching kernel.

The package is fully functional without the extension: when the build is
skipped or fails, ``tagrec.matcher`` falls back to the numpy kernel at
import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tagrec._greedy",
                ["src/tagrec/_greedy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
