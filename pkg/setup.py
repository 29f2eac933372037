import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: spin2mp falls back to the numpy
# implementations at import time if the extension is missing.
try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension("spin2mp._core", ["src/spin2mp/_core.pyx"],
                   include_dirs=[np.get_include()])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
