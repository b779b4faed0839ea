"""Setup script for the package."""

from setuptools import setup, find_packages
import os

# Read the contents of README.md
with open("README.md", encoding="utf-8") as f:
    long_description = f.read()

# Read the version from the package
about = {}
with open(os.path.join("src", "pamr", "__version__.py"), encoding="utf-8") as f:
    exec(f.read(), about)

install_requires = [
    "pandas>=2.0.0",
    "numpy>=1.24.0",
    "networkx>=3.0",
    "penman>=1.3.0",
    "python-dotenv>=1.0.1",
]

setup(
    name="pamr",
    version=about["__version__"],
    description="Persian AMR toolkit: PENMAN codec, guideline validator, Smatch and corpus agreement",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    package_data={"pamr.guideline": ["data/*.lex"]},
    include_package_data=True,
    python_requires=">=3.10",
    install_requires=install_requires,
    entry_points={
        "console_scripts": [
            "pamr=pamr.main:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3.10",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Text Processing :: Linguistic",
    ],
)
