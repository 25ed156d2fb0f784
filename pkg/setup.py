from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; fplinalg falls back to the numpy kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("foldquiv._fpkernel", ["src/foldquiv/_fpkernel.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
