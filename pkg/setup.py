import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    # Hot pointwise kernels of the split-step loop. The package falls back to
    # the numpy implementations in causticnls._kernels_py when this extension
    # is unavailable.
    ext_modules = cythonize(
        [
            Extension(
                "causticnls._kernels",
                ["src/causticnls/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
