"""Build the optional compiled kernels.

The extension links the libgmp that ships inside the gmpy2 wheel so the
process holds a single copy of GMP.  If anything is missing the build is
skipped and the package falls back to ``sigflow._kernels_py``.
"""

import glob
import os

from setuptools import Extension, setup


def kernel_extensions():
    try:
        import gmpy2
        from Cython.Build import cythonize
    except ImportError:
        return []
    pkg = os.path.dirname(gmpy2.__file__)
    bundled = sorted(glob.glob(os.path.join(pkg, os.pardir, "gmpy2.libs", "libgmp*.so*")))
    if bundled:
        libdir = os.path.realpath(os.path.dirname(bundled[0]))
        link = dict(extra_objects=[os.path.realpath(bundled[0])], runtime_library_dirs=[libdir])
    else:
        link = dict(libraries=["gmp"])
    ext = Extension(
        "sigflow._kernels_c",
        ["src/sigflow/_kernels_c.pyx"],
        include_dirs=[pkg],
        extra_compile_args=["-O2"],
        optional=True,
        **link,
    )
    return cythonize([ext], compiler_directives={"language_level": "3"}, quiet=True)


setup(ext_modules=kernel_extensions())
