#!/usr/bin/env python
# Setuptools script for the halfspace learning toolkit

from setuptools import setup
from halfspace.learning import version

setup(
    name=version.PACKAGE,
    version=version.VERSION,
    description=version.NAME,
    author=version.AUTHORS[0]['name'],
    author_email=version.AUTHORS[0]['email'],
    packages=[
        'halfspace',
        'halfspace.learning',
        'halfspace.harness',
        'tests',
    ],
    scripts=['run.sh', 'sweep.sh', 'properties.sh'],
    entry_points={
        'console_scripts': ['halfspace=halfspace.harness.cli:run'],
    },
    license='GNU GPL v3',
    python_requires='>=3.8',
    install_requires=['twisted', 'zope.interface', 'demjson3', 'numpy', 'scipy'],
    tests_require=['hypothesis'],
    test_suite='tests'
)
