from os import path
from setuptools import find_packages, setup

with open(path.join(path.dirname(__file__), 'README.md')) as readme:
    LONG_DESCRIPTION = readme.read()

setup(
    name='multicast_speedup',
    use_scm_version=True,
    setup_requires=['setuptools_scm'],
    description='Exact speedup bounds for network-coded multicast switches',
    long_description=LONG_DESCRIPTION,
    long_description_content_type='text/markdown',
    license='BSD',
    keywords='switch scheduling multicast network coding perfect graphs linear programming',
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    python_requires='>=3.8',
    install_requires=[
        'networkx',
        'pandas',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': [
            'multicast-speedup = multicast_speedup.cli:main',
        ],
    },
    zip_safe=False,
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'Programming Language :: Python :: 3 :: Only',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: System :: Networking',
    ],
)
