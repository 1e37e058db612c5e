import argparse

from setuptools import setup
from setuptools import find_packages

# parse args
parser = argparse.ArgumentParser()
parser.add_argument('--with-z3', '-z', action='store_true')
args, unknown = parser.parse_known_args()

z3_requires = ['z3-solver>=4.8.0'] if args.with_z3 else []

setup(name='ordata',
      version='0.0.1',
      description='Automata over ordered-data trees: membership, emptiness and constraint satisfiability',
      python_requires='>=3.8',
      install_requires=['numpy>=1.15.3',
                        'scipy>=1.9.0',
                        'networkx>=2.2',
                        'tabulate>=0.8.2',
                        'coloredlogs>=10.0',
                        'tqdm>=4.30.0'] + z3_requires,
      extras_require={'z3': ['z3-solver>=4.8.0'],
                      'test': ['pytest>=6.0']},
      entry_points={'console_scripts': ['ordata=ordata.cli.main:main']},
      packages=find_packages(exclude=['tests']))
