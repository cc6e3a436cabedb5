# ----------------------------------------------------------------------------
# Distributed under the terms of the Modified BSD License.
# ----------------------------------------------------------------------------

from setuptools import setup, find_packages

from cpc_models import __version__

setup(
    name="cpc-models",
    packages=find_packages(),
    version=__version__,
    description="Simulation and verification of command-addressed quantum "
                "models",
    license='BSD-3-Clause',
    python_requires='>=3.8',
    install_requires=['numpy', 'scipy', 'pandas', 'click'],
    package_data={'cpc_models': [
        'simulator_config.json',
        'tests/*.*',
        'tests/data/*.*']},
    entry_points={
        'console_scripts': ['cpc-models = cpc_models.cli:cli']},
)
