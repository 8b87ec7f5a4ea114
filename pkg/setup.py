import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ELTIP_NO_EXTENSION", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("Cython not available; installing the pure-Python fallback only")
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "eltip._kernels",
                    ["src/eltip/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3", "-fcx-limited-range"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
