"""Build the optional compiled reduction kernel.

The package works without it: ``ambikit.groebner.kernel`` falls back to
the pure-Python implementation when the extension is missing.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("AMBIKIT_NO_EXT", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:  # pragma: no cover
        pass
    else:
        ext_modules = cythonize(
            [Extension("ambikit.groebner._kernel", ["src/ambikit/groebner/_kernel.pyx"])],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
