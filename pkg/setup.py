from setuptools import setup, find_packages

NAME = 'strel'
VERSION = '1.0.0'

TEST_REQUIREMENTS = ['pytest']

with open('requirements.txt', encoding='utf-8') as f:
    # requirements.txt is the dev environment; test tools go to the extra
    requirements = [line for line in f.read().splitlines() if line.strip() and line not in TEST_REQUIREMENTS]

setup(
    name=NAME,
    version=VERSION,
    packages=find_packages(include=['core', 'core.*', 'batch', 'batch.*']),
    py_modules=['strel'],
    install_requires=requirements,
    extras_require={'test': TEST_REQUIREMENTS},
    entry_points={'console_scripts': ['strel = strel:main']},
)
