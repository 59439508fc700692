"""Build script for the optional compiled kernel extension.

The package works without the extension: ``sdm_consensus.kernels`` falls
back to the pure-Python twin when the compiled module is missing, so the
extension is marked optional and a failed compile does not fail the install.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        ["src/sdm_consensus/_native.pyx"],
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.optional = True

setup(ext_modules=ext_modules)
