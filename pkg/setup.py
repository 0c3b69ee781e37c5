from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # No Cython: install the pure numpy backend only.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "smirnov._kernels",
                ["src/smirnov/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
