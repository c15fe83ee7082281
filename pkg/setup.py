from setuptools import find_packages, setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open('requirements.txt') as f:
    install_requirement = f.readlines()

with open('tcoulomb/version.py') as f:
    version = f.read().split('=')[1].strip().strip('"\'')

setup(
    name="tcoulomb",
    version=version,
    description="Exact and numerical bound states of the truncated Coulomb potential -beta/(r+1)",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests"]),
    install_requires=install_requirement,
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.9",
    entry_points={
        "console_scripts": [
            "tcoulomb = tcoulomb.main:main"
        ]
    },
)
