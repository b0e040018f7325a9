import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernel is optional: set LUMEN_FORGE_NO_EXT=1 to install the
# pure-Python fallback only (selected automatically at import time).
ext_modules = []
if not os.environ.get("LUMEN_FORGE_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "lumen_forge._kernels",
                sources=["src/lumen_forge/_kernels.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps double arithmetic bit-identical to
                # the pure-Python fallback (no FMA fusion).
                extra_compile_args=["-O3", "-ffp-contract=off", "-fopenmp"],
                extra_link_args=["-fopenmp"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
