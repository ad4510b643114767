from setuptools import Extension, setup

# The compiled kernel is optional: without Cython (or a C compiler) the
# package falls back to the pure-Python kernels at import time.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "corrdyn._kernels_cy",
                ["src/corrdyn/_kernels_cy.pyx"],
                # -ffp-contract=off: no FMA fusion, so the compiled kernel
                # reproduces Python's float semantics bit for bit.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
