#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""The setup script."""

from setuptools import setup, find_packages

with open("README.rst") as readme_file:
    readme = readme_file.read()

requirements = ["Click>=8.0,<8.2", "marshmallow>=3.13,<4", "pyyaml", "numpy", "pandas"]

setup_requirements = ["pytest-runner"]

test_requirements = ["pytest"]

setup(
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering",
    ],
    description=(
        "Simulator for periodic event-triggered prescribed-time control of "
        "Euler-Lagrange systems"
    ),
    install_requires=requirements,
    license="MIT license",
    long_description=readme,
    long_description_content_type="text/x-rst",
    include_package_data=True,
    keywords="petcsim event-triggered control robotics simulation",
    name="petcsim",
    packages=find_packages(include=["petcsim", "petcsim.*"]),
    package_data={
        # bundled scenarios
        "": ["*.yaml"]
    },
    entry_points={
        "console_scripts": [
            "petcsim=petcsim.cli:main",
        ],
    },
    python_requires=">=3.9",
    setup_requires=setup_requirements,
    test_suite="tests",
    tests_require=test_requirements,
    version="0.1.0",
    zip_safe=False,
)
