from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "lplde._core",
    sources=[
        "bindings/lplde_py.cpp",
        "src/ring.cpp",
        "src/expansion.cpp",
        "src/vdp.cpp",
        "src/ode.cpp",
        "src/oracle.cpp",
        "src/pms.cpp",
        "src/io.cpp",
    ],
    include_dirs=["include", "vendor"],
    libraries=["mpfr", "gmpxx", "gmp"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
