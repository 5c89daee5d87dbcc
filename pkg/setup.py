from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; genuslab.kernels falls back
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("genuslab._kernels", ["src/genuslab/_kernels.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
