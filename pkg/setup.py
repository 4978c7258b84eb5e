"""Builds the optional compiled hop kernel. Without Cython or a compiler the
package still installs and falls back to the pure-Python kernel."""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("shortcut_sssp._hopcore", ["src/shortcut_sssp/_hopcore.pyx"],
                   include_dirs=[numpy.get_include()], language="c++",
                   extra_compile_args=["-O3"],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
