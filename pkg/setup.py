from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Source checkout without Cython: install pure-Python fallback only.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("qcskew._kernels_cy", ["src/qcskew/_kernels_cy.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
