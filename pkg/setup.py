import os
from setuptools import find_packages
from setuptools import setup

with open(os.path.join("lvec", "VERSION")) as file:
    version = file.read().strip()

with open("README.rst") as file:
    long_description = file.read()


setup(
    name="lvec",
    description="Interpreter, type checker and property suites for a linear lambda-calculus over vectors",
    long_description=long_description,
    license="Apache License 2.0",
    version=version,
    keywords="lambda-calculus linear algebraic type-system rewriting vectors matrices hadamard",
    packages=find_packages(include=["lvec*"]),
    package_dir={"lvec": "lvec"},
    package_data={"lvec": ["VERSION", "prelude.lvec"]},
    include_package_data=True,
    zip_safe=False,
    python_requires=">=3.9",
    install_requires=["click>=8.0", "jmespath"],
    entry_points={"console_scripts": ["lvec=lvec.cli:main"]},
    platforms="Platform Independent",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Education",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Natural Language :: English",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Software Development :: Interpreters",
    ],
)
