# -*- coding: utf-8 -*-
from setuptools import setup

setup(
      name='cvsampling',
      version='0.1',
      description='Simulation, homodyne characterization and verification of continuous-variable boson sampling experiments',
      url='http://github.com/jensdebruijn/cvsampling',
      author='Jens de Bruijn',
      author_email='j.a.debruijn@outlook.com',
      packages=[
            'cvsampling',
            'cvsampling.library',
      ],
      package_data={
            '': ['README.md']
      },
      include_package_data=True,
      zip_safe=False,
      python_requires='>=3.9',
      install_requires=[
            "numpy",
            "numba",
            "scipy",
            "thewalrus",
            "pandas>=1.5",
            "pyyaml"
      ],
      extras_require = {
            'docs': ["sphinx", "sphinx_rtd_theme", "sphinx-autodoc-typehints", "sphinxcontrib-autoprogram"],
            'tests': ["matplotlib", "pytest", "pytest-plt", "pytest-benchmark"]
      },
      entry_points={
            'console_scripts': ['cvsampling=cvsampling.__main__:main'],
      },
)
