import os
from setuptools import setup

# read the contents of your README file
this_directory = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(this_directory, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(name          = 'sgfem',
      version       = '0.1.0',
      description   = 'Stable generalized finite elements for one dimensional quasilinear elliptic interface problems, with locally conservative solves and convergence studies.',
      long_description_content_type='text/markdown',
      long_description=long_description,
      packages      = ['sgfem'],
      license       = 'Apache',
      classifiers   = [# How mature is this project?
                       'Development Status :: 3 - Alpha',

                       # Indicate who your project is intended for
                       'Intended Audience :: Science/Research',
                       'Topic :: Scientific/Engineering :: Mathematics',

                       # Pick your license as you wish (should match "license" above)
                        'License :: OSI Approved :: Apache Software License',

                       'Programming Language :: Python :: 3',
                       'Programming Language :: Python :: 3.9'],
      keywords      = 'finite element enrichment interface quasilinear elliptic local conservation',
      python_requires  = '>=3.9',
      install_requires = ['numpy>=1.22',
                          'scipy>=1.8',
                          'pandas>=1.5',
                          'matplotlib>=3.5',
                          'psutil'],
      extras_require   = {'test': ['pytest']},
      package_dir   = { 'sgfem':'sgfem' },
      package_data  = { 'sgfem':['Examples/*/*'] },
      entry_points  = { 'console_scripts': ['run_sgfem=sgfem.Run:main']},
      )
