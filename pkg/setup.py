import re
from setuptools import setup, find_packages

def get_version():
    VERSIONFILE = "swipt/_version.py"
    verstrline = open(VERSIONFILE, "rt").read()
    VSRE = r"^__version__ = ['\"]([^'\"]*)['\"]"
    mo = re.search(VSRE, verstrline, re.M)
    if mo:
        verstr = mo.group(1)
    else:
        raise RuntimeError("Unable to find version string in %s." % (VERSIONFILE,))
    return verstr


with open("README.md",'r') as fh:
    long_description = fh.read()

setup(
    name='pyswipt',
    version=get_version(),
    packages=find_packages(exclude=['tests']),
    license='LICENSE',
    description='Stochastic-geometry analysis and Monte Carlo simulation of SWIPT in multi-tier cellular networks',
    long_description=long_description,
    long_description_content_type='text/markdown',
    install_requires=[
        'numpy',
        'scipy',
        'pandas',
        'tomli; python_version < "3.11"'
    ],
    extras_require = {
        'test': [
            'pytest',
            'pytest-cov'
        ],
        'dev': [
            'sphinx',
            'sphinx-rtd-theme'
        ],
        'all': [
            'pytest',
            'pytest-cov',
            'sphinx',
            'sphinx-rtd-theme'
        ]
    },
    entry_points={
        'console_scripts': ['swipt=swipt.cli:main']
    },
    package_data={'swipt': ['artifacts/Configurations/*.toml']},
    include_package_data=True,
    python_requires=">=3.8",
    zip_safe=False
)
