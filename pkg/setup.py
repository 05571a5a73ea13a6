from setuptools import setup, find_packages
import tailix


def _load_readme():
    with open("README.md", "r") as file:
        readme = file.read()
    return readme


setup(
    name='tailix',
    version=tailix.__version__,
    packages=find_packages(),
    license='BSD-3-Clause License',
    description='A Python library for tail index estimation with block maxima ratios and classical estimators',
    long_description=_load_readme(),
    long_description_content_type="text/markdown",
    python_requires='>=3.8',
    install_requires=['numpy',
                      'scipy',
                      'scikit-learn',
                      'joblib',
                      'pandas>=1.5',
                      'matplotlib',
                      'Pillow'],
    entry_points={'console_scripts': ['tailix=tailix.cli.main:main']}
)
