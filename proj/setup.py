"""Builds the C++ extension through CMake and packages it with the Python
sources under python/riskgame.  Editable installs drop the compiled module
next to the package sources."""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        ext_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        source = Path(__file__).parent.resolve()
        subprocess.run(
            [
                "cmake",
                "-S", str(source),
                "-B", str(build_dir),
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={ext_dir}",
                f"-DPython3_EXECUTABLE={sys.executable}",
                "-DCMAKE_BUILD_TYPE=Release",
                "-DRISKGAME_BUILD_PYTHON=ON",
                "-DRISKGAME_BUILD_TESTS=OFF",
                "-DRISKGAME_BUILD_CLI=OFF",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_riskgame", "-j"],
            check=True,
        )


setup(
    packages=["riskgame"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("riskgame._riskgame")],
    cmdclass={"build_ext": CMakeBuild},
)
