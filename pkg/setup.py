"""Build script: compiles the optional Cython fold-assignment kernel.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so any compilation failure downgrades
to a plain pure-Python install instead of aborting.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/yolofold/_speedups.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # Cython or a C compiler may be absent
    print(f"yolofold: skipping compiled kernel ({exc!r}); "
          "falling back to the pure-Python kernel", file=sys.stderr)

setup(ext_modules=ext_modules)
