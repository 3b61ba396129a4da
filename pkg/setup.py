import os

from setuptools import setup

ext_modules = []
if os.environ.get("QHE_SPECTRO_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "qhe_spectro._cdopri",
                    ["src/qhe_spectro/_cdopri.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # the pure-Python stepper in _pydopri is picked up at import time instead
        ext_modules = []

setup(ext_modules=ext_modules)
