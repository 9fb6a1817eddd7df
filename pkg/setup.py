from setuptools import setup, find_packages

with open('README.rst') as readme:
    __doc__ = readme.read()


# Dynamically calculate the version based on gazetna.VERSION.
version = __import__('gazetna').get_version()

setup(
    name='gazetna',
    version=version,
    description='Transition network analysis of eye-tracking fixation logs',
    long_description=__doc__,
    license='BSD',
    packages=find_packages(exclude=('tests', 'tests.*')),
    package_data={'gazetna': ['presets/*.json']},
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3 :: Only',
        'Topic :: Scientific/Engineering :: Information Analysis',
    ],
    python_requires='>=3.8',
    zip_safe=False,
    install_requires=[
        'numpy>=1.22',
        'scipy>=1.8',
        'pandas>=1.5',
        'networkx>=3.1',
        'graphviz>=0.20',
        'PyYAML>=6.0',
    ],
    entry_points={
        'console_scripts': ['gazetna = gazetna.cli:main'],
    },
)
